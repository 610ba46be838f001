"""Backend selection for the cohort-stack kernels.

The jitted path is used when numba imports cleanly; set the environment
variable ``CMVESSEL_NO_NUMBA=1`` (before import) to force the pure-numpy
fallback. Both backends implement the identical contract and are compared
by tests and by benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_DISABLED = os.environ.get("CMVESSEL_NO_NUMBA", "").strip() not in ("", "0", "false", "False")

if not _DISABLED:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _kernels_numpy
        BACKEND = "numpy"
else:
    _impl = _kernels_numpy
    BACKEND = "numpy"

fiber_assemble = _impl.fiber_assemble
iso_assemble = _impl.iso_assemble
fiber_invariants = _impl.fiber_invariants


def warm_up():
    """Trigger JIT compilation of the hot kernels (no-op on the numpy path)."""
    import numpy as np

    M = np.repeat(np.eye(3)[None, :, :], 2, axis=0)
    w = np.ones(2)
    fiber_assemble(M, w, np.eye(3), 1.0, 1.0, True)
    iso_assemble(M, w, 1.0)
    fiber_invariants(M, np.eye(3))
