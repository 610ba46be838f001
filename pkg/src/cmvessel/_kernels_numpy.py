"""Pure-numpy reference implementations of the cohort-stack kernels.

Each kernel folds the heredity integral of one constituent at one material
point: cohorts are stacked along the leading axis, weights already contain
the quadrature weight times m_R(tau) q(s,tau) / rho_hat (plus the surviving
initial-cohort term), and the per-cohort geometry is pre-reduced to

    M[i] = A[i] H[i] A[i]^T   (fiber constituents)
    B[i] = A[i] A[i]^T        (isotropic constituents)

with A(tau) = F^-1(tau) F_G(tau). The fiber invariant then collapses to
I4 = C(s) : M, and the exponential stored-energy coefficients weight M and
M (x) M directly.
"""

from __future__ import annotations

import numpy as np


def fiber_assemble(M, w, C, c1, c2, want_tangent):
    """Referential stress and elasticity sums of a fiber constituent.

    Returns (S, C4) with
        S  = sum_i w[i] * c1*(I4_i - 1)*exp(c2*(I4_i - 1)^2) * M[i]
        C4 = sum_i w[i] * 2*c1*(1 + 2*c2*(I4_i-1)^2)*exp(...) * M[i] (x) M[i]
    C4 is None when want_tangent is false.
    """
    I4 = np.einsum("ij,nij->n", C, M)
    x = I4 - 1.0
    e = np.exp(c2 * x * x)
    fS = c1 * x * e
    S = np.einsum("n,nij->ij", w * fS, M)
    C4 = None
    if want_tangent:
        fC = 2.0 * c1 * (1.0 + 2.0 * c2 * x * x) * e
        C4 = np.einsum("n,nij,nkl->ijkl", w * fC, M, M)
    return S, C4


def iso_assemble(B, w, c):
    """Referential stress sum of a neoHookean constituent: c * sum w[i] B[i].

    The neoHookean constituent-level tangent is identically zero, so only the
    stress is returned.
    """
    return c * np.einsum("n,nij->ij", w, B)


def fiber_invariants(M, C):
    """I4 per cohort: C(s) : M[i]."""
    return np.einsum("ij,nij->n", C, M)
