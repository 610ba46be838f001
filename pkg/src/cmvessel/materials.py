"""Constituent-level constitutive models.

Stored energy, second Piola-Kirchhoff stress and material elasticity tensor
for the two constituent classes (isotropic neoHookean, fiber-reinforced
exponential), plus the active smooth-muscle stress and small helpers for
fiber geometry. All stresses are in kPa; all inputs live in the constituent
natural configuration (right Cauchy-Green tensor Cn, structural tensor H).

The neoHookean form is used without an isochoric split: its PK2 stress is
the constant c*I and its constituent-level tangent vanishes identically.
Stiffness of isotropic constituents therefore enters the mixture through
deposition prestretch and the Lagrange pressure, not through this tangent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KinematicsError
from .tensors import I2, check_deformation_gradient, is_spd

NEOHOOKEAN = "neohookean"
FUNG = "fung"


def fiber_direction(alpha_from_axis_rad: float) -> np.ndarray:
    """Unit fiber direction in (r, theta, z) at angle alpha from the vessel axis.

    alpha = 0 is axial, alpha = pi/2 is circumferential.
    """
    return np.array([0.0, np.sin(alpha_from_axis_rad), np.cos(alpha_from_axis_rad)])


@dataclass(frozen=True)
class MaterialModel:
    """Tagged union of the two constituent stored-energy variants."""

    kind: str
    c: float = 0.0          # neoHookean modulus, kPa
    c1: float = 0.0         # exponential fiber modulus, kPa
    c2: float = 0.0         # exponential fiber exponent, dimensionless
    h0: np.ndarray | None = None  # reference fiber direction (unit)

    def __post_init__(self):
        if self.kind not in (NEOHOOKEAN, FUNG):
            raise ValueError(f"unknown material kind {self.kind!r}")
        if self.kind == NEOHOOKEAN:
            if self.c < 0.0:
                raise ValueError("neoHookean modulus must be non-negative")
        else:
            if self.c1 < 0.0 or self.c2 <= 0.0:
                raise ValueError("fiber parameters require c1 >= 0 and c2 > 0")
            if self.h0 is None:
                raise ValueError("fiber material requires a reference direction h0")
            h0 = np.asarray(self.h0, dtype=float)
            if abs(np.linalg.norm(h0) - 1.0) > 1e-12:
                raise ValueError("fiber direction h0 must be a unit vector")
            object.__setattr__(self, "h0", h0)

    @property
    def is_fiber(self) -> bool:
        return self.kind == FUNG


@dataclass(frozen=True)
class DepositionStretch:
    """Volume-preserving stretch at which new mass is incorporated.

    Either a full (G_r, G_theta, G_z) triple (isotropic constituents) or a
    scalar fiber prestretch expanded transversely-isotropically about h0:
    G = G_f h0 (x) h0 + G_f^(-1/2) (I - h0 (x) h0). det(G) = 1 either way.
    """

    triple: tuple[float, float, float] | None = None
    fiber: float | None = None
    h0: np.ndarray | None = None

    def __post_init__(self):
        if (self.triple is None) == (self.fiber is None):
            raise ValueError("specify exactly one of triple= or fiber=")
        if self.fiber is not None:
            if self.fiber <= 0.0:
                raise ValueError("fiber prestretch must be positive")
            if self.h0 is None:
                raise ValueError("fiber prestretch requires a direction h0")
            object.__setattr__(self, "h0", np.asarray(self.h0, dtype=float))
        else:
            g = self.triple
            if min(g) <= 0.0:
                raise ValueError("prestretch triple must be positive")
            det = g[0] * g[1] * g[2]
            if abs(det - 1.0) > 1e-12:
                raise ValueError(f"prestretch triple must be volume preserving, det={det:.15g}")

    def tensor(self) -> np.ndarray:
        if self.triple is not None:
            return np.diag(self.triple)
        H = np.outer(self.h0, self.h0)
        return self.fiber * H + self.fiber ** (-0.5) * (I2 - H)


@dataclass(frozen=True)
class ActiveStressParams:
    """Active smooth-muscle stress parameters."""

    T_max: float            # kPa
    lambda_M: float         # stretch of maximal force generation
    lambda_0: float         # stretch below which force vanishes
    C_B: float              # basal constrictor/dilator ratio
    C_S: float              # shear-deviation scaling of that ratio
    k_act: float            # 1/day, vasomotor tone relaxation rate

    def __post_init__(self):
        if not (self.lambda_M > self.lambda_0 > 0.0):
            raise ValueError("active stress requires lambda_M > lambda_0 > 0")
        if self.T_max < 0.0:
            raise ValueError("T_max must be non-negative")


def _check_cn(Cn: np.ndarray):
    if not is_spd(Cn):
        raise KinematicsError("Cn must be symmetric positive-definite")


def strain_energy(model: MaterialModel, Cn: np.ndarray, H: np.ndarray | None = None) -> float:
    """Volume-specific stored energy (kPa) of one cohort of a constituent."""
    _check_cn(Cn)
    if model.kind == NEOHOOKEAN:
        return 0.5 * model.c * (np.trace(Cn) - 3.0)
    I4 = float(np.einsum("ij,ij->", Cn, H))
    if I4 <= 0.0:
        raise KinematicsError("fiber invariant Cn:H must be positive")
    x = I4 - 1.0
    return model.c1 / (4.0 * model.c2) * (np.exp(model.c2 * x * x) - 1.0)


def pk2_hat(model: MaterialModel, Cn: np.ndarray, H: np.ndarray | None = None) -> np.ndarray:
    """Constituent-level PK2 stress 2 dW/dCn (kPa)."""
    _check_cn(Cn)
    if model.kind == NEOHOOKEAN:
        return model.c * I2.copy()
    I4 = float(np.einsum("ij,ij->", Cn, H))
    if I4 <= 0.0:
        raise KinematicsError("fiber invariant Cn:H must be positive")
    x = I4 - 1.0
    return model.c1 * x * np.exp(model.c2 * x * x) * H


def elasticity_hat(model: MaterialModel, Cn: np.ndarray, H: np.ndarray | None = None) -> np.ndarray:
    """Constituent-level material elasticity tensor 4 d2W/dCn dCn (kPa)."""
    _check_cn(Cn)
    if model.kind == NEOHOOKEAN:
        return np.zeros((3, 3, 3, 3))
    I4 = float(np.einsum("ij,ij->", Cn, H))
    if I4 <= 0.0:
        raise KinematicsError("fiber invariant Cn:H must be positive")
    x = I4 - 1.0
    coef = 2.0 * model.c1 * (1.0 + 2.0 * model.c2 * x * x) * np.exp(model.c2 * x * x)
    return coef * np.einsum("ij,kl->ijkl", H, H)


def fiber_stress_coefficient(model: MaterialModel, I4: float) -> float:
    """Scalar multiplying H in pk2_hat, as a function of the fiber invariant."""
    x = I4 - 1.0
    return model.c1 * x * np.exp(model.c2 * x * x)


def activation_level(params: ActiveStressParams, delta_tau: float) -> float:
    """Constrictor tone factor 1 - exp(-C^2) with C = C_B - C_S * delta_tau."""
    C = params.C_B - params.C_S * delta_tau
    return 1.0 - np.exp(-C * C)


def force_length_factor(params: ActiveStressParams, lambda_act: float) -> float:
    """Parabolic force-length factor, clamped to zero outside (lambda_0, lambda_M)."""
    if not (params.lambda_0 < lambda_act < params.lambda_M):
        return 0.0
    r = (params.lambda_M - lambda_act) / (params.lambda_M - params.lambda_0)
    return 1.0 - r * r


def active_pk2(params: ActiveStressParams, lambda_act: float, delta_tau: float,
               H0: np.ndarray) -> np.ndarray:
    """Active PK2 stress T_max (1-e^{-C^2}) lambda_act [parabola] H0 (kPa)."""
    mag = params.T_max * activation_level(params, delta_tau) * lambda_act \
        * force_length_factor(params, lambda_act)
    return mag * H0


def active_cauchy(params: ActiveStressParams, phi_m: float, lambda_act: float,
                  delta_tau: float, F: np.ndarray, H0: np.ndarray) -> np.ndarray:
    """Active Cauchy stress (phi_m / det F) F S_act F^T (kPa).

    phi_m is the referential volume fraction rho_R^m(s) / rho_hat^m of the
    muscle constituent.
    """
    J = check_deformation_gradient(F)
    if not (0.0 <= phi_m <= 1.0 + 1e-9):
        raise ValueError("muscle volume fraction must lie in [0, 1]")
    S_act = active_pk2(params, lambda_act, delta_tau, H0)
    return (phi_m / J) * (F @ S_act @ F.T)


def structural_tensor(h0: np.ndarray, R: np.ndarray | None = None) -> np.ndarray:
    """Rank-one projector H = (R h0) (x) (R h0)."""
    h = h0 if R is None else R @ h0
    return np.outer(h, h)
