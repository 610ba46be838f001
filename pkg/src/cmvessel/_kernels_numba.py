"""Numba-jitted cohort-stack kernels (contract documented in _kernels_numpy)."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _fiber_assemble_jit(M, w, C, c1, c2, want_tangent):
    n = M.shape[0]
    S = np.zeros((3, 3))
    C4 = np.zeros((3, 3, 3, 3))
    for i in range(n):
        I4 = 0.0
        for a in range(3):
            for b in range(3):
                I4 += C[a, b] * M[i, a, b]
        x = I4 - 1.0
        e = np.exp(c2 * x * x)
        ws = w[i] * c1 * x * e
        for a in range(3):
            for b in range(3):
                S[a, b] += ws * M[i, a, b]
        if want_tangent:
            wc = w[i] * 2.0 * c1 * (1.0 + 2.0 * c2 * x * x) * e
            for a in range(3):
                for b in range(3):
                    mab = wc * M[i, a, b]
                    for c in range(3):
                        for d in range(3):
                            C4[a, b, c, d] += mab * M[i, c, d]
    return S, C4


@njit(cache=True)
def _iso_assemble_jit(B, w, c):
    n = B.shape[0]
    S = np.zeros((3, 3))
    for i in range(n):
        for a in range(3):
            for b in range(3):
                S[a, b] += w[i] * B[i, a, b]
    return c * S


@njit(cache=True)
def _fiber_invariants_jit(M, C):
    n = M.shape[0]
    out = np.empty(n)
    for i in range(n):
        I4 = 0.0
        for a in range(3):
            for b in range(3):
                I4 += C[a, b] * M[i, a, b]
        out[i] = I4
    return out


def fiber_assemble(M, w, C, c1, c2, want_tangent):
    S, C4 = _fiber_assemble_jit(M, w, C, c1, c2, want_tangent)
    return S, (C4 if want_tangent else None)


def iso_assemble(B, w, c):
    return _iso_assemble_jit(B, w, c)


def fiber_invariants(M, C):
    return _fiber_invariants_jit(M, C)
