"""Linearized stress update about a converged-mixture iterate, plus Aitken.

The solid solve inside the coupling loop never re-evaluates the heredity
integrals. It works on a frozen snapshot (reference stress, spatial tangent,
Lagrange pressure, target volume increment) and updates the configuration
through an incremental deformation F* applied on top of the snapshot state:

    sigma_next = -(p + p*) I + (1/J*) F* sigma_ref F*^T + (1/J*) F* (c : E*) F*^T
    p*   = -k_p (det F* - J*)
    E*   = 1/2 [ (det F*)^(-2/3) F*^T F* - I ]

E* is the Green strain of the isochoric part of F*: a pure dilation to the
target volume (F* = J*^(1/3) I) is strain-free and penalty-free, so grown
volume is incorporated without spurious elastic stress, while the dilational
penalty drives det F* toward J*. The update has the form of a St. Venant-
Kirchhoff material with prestress and is what a standard displacement solver
sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KinematicsError
from .tensors import I2, ddot

DEFAULT_PENALTY_KPA = 1.0e4


@dataclass
class LinearizedMaterial:
    """Frozen mixture snapshot driving one solid solve."""

    sigma_ref: np.ndarray   # deformation-dependent Cauchy stress, kPa
    c_spatial: np.ndarray   # spatial elasticity tensor, kPa
    p_ref: float            # Lagrange pressure at the snapshot, kPa
    J_star: float           # target volume increment J_target / det(F_ref)
    k_p: float = DEFAULT_PENALTY_KPA

    def __post_init__(self):
        if self.J_star <= 0.0:
            raise ValueError("target volume increment must be positive")
        if self.k_p <= 0.0:
            raise ValueError("penalty modulus must be positive")


def incremental_strain(F_star: np.ndarray, J_star: float) -> np.ndarray:
    """Green strain of the isochoric part of the incremental deformation."""
    det = np.linalg.det(F_star)
    if det <= 0.0:
        raise KinematicsError("incremental deformation must preserve orientation")
    return 0.5 * (det ** (-2.0 / 3.0) * (F_star.T @ F_star) - I2)


def linearized_cauchy(mat: LinearizedMaterial, F_star: np.ndarray) -> np.ndarray:
    """Total Cauchy stress of the linearized update at incremental F*."""
    det = float(np.linalg.det(F_star))
    if det <= 0.0:
        raise KinematicsError("incremental deformation must preserve orientation")
    E = incremental_strain(F_star, mat.J_star)
    p_star = -mat.k_p * (det - mat.J_star)
    push = F_star @ (mat.sigma_ref + ddot(mat.c_spatial, E)) @ F_star.T / mat.J_star
    return -(mat.p_ref + p_star) * I2 + push


@dataclass
class AitkenState:
    """Relaxation factor and previous residual of a fixed-point sequence."""

    omega0: float = 0.5
    omega: float = 0.5
    r_prev: np.ndarray | None = None
    iteration: int = 0

    def reset(self):
        self.omega = self.omega0
        self.r_prev = None
        self.iteration = 0


def aitken_step(state: AitkenState, d_prev: np.ndarray, d_tilde: np.ndarray
                ) -> np.ndarray:
    """One dynamically relaxed fixed-point update dnext = w d~ + (1-w) d.

    The first two iterations use the fixed startup factor; afterwards the
    factor follows the secant rule on successive residuals. A vanishing
    residual difference (converged or stalled sequence) reuses the previous
    factor and lets the caller's tolerance checks decide.
    """
    d_prev = np.asarray(d_prev, dtype=float)
    d_tilde = np.asarray(d_tilde, dtype=float)
    if d_prev.shape != d_tilde.shape:
        raise ValueError("displacement fields must have equal length")
    r = d_tilde - d_prev
    if state.iteration >= 2 and state.r_prev is not None:
        dr = r - state.r_prev
        denom = float(dr @ dr)
        if denom > 0.0:
            state.omega = -state.omega * float(state.r_prev @ dr) / denom
    else:
        state.omega = state.omega0
    state.r_prev = r
    state.iteration += 1
    return state.omega * d_tilde + (1.0 - state.omega) * d_prev
