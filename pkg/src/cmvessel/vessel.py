"""Thin-walled axisymmetric wall segments and their equilibrium solves.

Kinematics: F = diag(lambda_r, lambda_theta, 1) in (r, theta, z), axially
clamped (lambda_z = 1), with lambda_r = J / lambda_theta so det F = J holds
exactly. Equilibrium is the Laplace balance of the mid-wall hoop stress
against the lumen pressure,

    sigma_theta_theta = P a / h,   a = lambda_theta a0,  h = h0 J / lambda_theta,

with the radial closure sigma_rr = -P/2 fixing the Lagrange pressure.

Two solvers produce the updated stretch:

* a damped Newton/secant oracle on the full nonlinear mixture stress
  (re-evaluated at every iterate), with a bisection fallback on a bracketing
  interval, and
* the production path, which solves the same balance with stress supplied by
  the linearized update (frozen snapshot, incremental F*), i.e. what a
  standard displacement solver would see.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import EquilibriumError
from .growth import LinearizedMaterial, linearized_cauchy
from .mixture import MaterialPoint

BRACKET = (0.5, 2.0)


@dataclass
class VesselSegment:
    """Reference geometry plus the evolving state of one axial wall ring."""

    a0: float                   # cm, reference inner radius
    h0: float                   # cm, reference thickness
    length: float               # cm
    z: float                    # cm, axial midpoint
    point: MaterialPoint
    lambda_theta: float = 1.0
    region: str = ""

    def __post_init__(self):
        if min(self.a0, self.h0, self.length) <= 0.0:
            raise ValueError("segment geometry must be positive")
        if self.lambda_theta <= 0.0:
            raise ValueError("circumferential stretch must be positive")


def segment_deformation(lambda_theta: float, J: float) -> np.ndarray:
    """Membrane deformation gradient diag(J/lambda_theta, lambda_theta, 1)."""
    if lambda_theta <= 0.0 or J <= 0.0:
        raise ValueError("stretch and volume ratio must be positive")
    return np.diag([J / lambda_theta, lambda_theta, 1.0])


def current_geometry(seg: VesselSegment, J: float,
                     lambda_theta: float | None = None) -> tuple[float, float]:
    """Current inner radius and thickness (a, h) in cm."""
    lam = seg.lambda_theta if lambda_theta is None else lambda_theta
    return lam * seg.a0, seg.h0 * J / lam


def laplace_hoop(seg: VesselSegment, P: float, lambda_theta: float, J: float) -> float:
    """Required hoop stress P a / h (kPa) at the given configuration."""
    a, h = current_geometry(seg, J, lambda_theta)
    return P * a / h


def _hoop_imbalance(seg: VesselSegment, P: float, lambda_theta: float,
                    J: float) -> float:
    """sigma_theta_theta(total) - P a / h at a trial stretch, frozen biology."""
    F = segment_deformation(lambda_theta, J)
    resp = seg.point.assemble(F, with_tangent=False)
    sigma = seg.point.total_cauchy(resp.sigma_bar, P)
    return float(sigma[1, 1]) - laplace_hoop(seg, P, lambda_theta, J)


def equilibrium_residual(seg: VesselSegment, P: float) -> float:
    """Laplace imbalance at the segment's current stretch and target volume."""
    J = seg.point.volume_ratio_target()
    return _hoop_imbalance(seg, P, seg.lambda_theta, J)


def _residual_scale(seg: VesselSegment, P: float, J: float) -> float:
    return max(seg.point.sigma_h, abs(laplace_hoop(seg, P, 1.0, J)), 1e-9)


def solve_equilibrium_newton(seg: VesselSegment, P: float, J_target: float,
                             tol_factor: float = 1e-9, max_iter: int = 60) -> float:
    """Stretch solving the full nonlinear Laplace balance (oracle path).

    Damped secant iteration started from the current stretch; any observed
    sign change tightens a bracket, and a stalled iteration falls back to
    bisection on that bracket (or on BRACKET if a sign change exists there).
    """
    g = lambda lam: _hoop_imbalance(seg, P, lam, J_target)
    tol = tol_factor * _residual_scale(seg, P, J_target)
    lam = seg.lambda_theta
    f = g(lam)
    if abs(f) < tol:
        return lam
    lo, f_lo, hi, f_hi = None, None, None, None

    def note(x, fx):
        nonlocal lo, f_lo, hi, f_hi
        if fx > 0.0 and (hi is None or x < hi):
            hi, f_hi = x, fx
        if fx < 0.0 and (lo is None or x > lo):
            lo, f_lo = x, fx

    note(lam, f)
    # secant partner a small step toward the loaded direction
    lam2 = lam * (1.0 + 1e-4) if f < 0.0 else lam * (1.0 - 1e-4)
    f2 = g(lam2)
    note(lam2, f2)
    for _ in range(max_iter):
        if abs(f2) < tol:
            seg.lambda_theta = lam2
            return lam2
        if f2 == f:
            break
        step = -f2 * (lam2 - lam) / (f2 - f)
        trial = lam2 + step
        accepted = False
        for _ in range(10):
            if BRACKET[0] <= trial <= BRACKET[1]:
                f_t = g(trial)
                note(trial, f_t)
                if abs(f_t) < abs(f2):
                    lam, f = lam2, f2
                    lam2, f2 = trial, f_t
                    accepted = True
                    break
            step *= 0.5
            trial = lam2 + step
        if not accepted:
            break
    # bisection fallback
    if lo is None or hi is None:
        for x in np.linspace(BRACKET[0], BRACKET[1], 17):
            note(x, g(x))
            if lo is not None and hi is not None:
                break
    if lo is None or hi is None:
        raise EquilibriumError(
            "no bracketing sign change for the wall equilibrium",
            diagnostics={"P_kPa": P, "J_target": J_target,
                         "residual_at_current": f, "bracket": BRACKET})
    root = brentq(g, min(lo, hi), max(lo, hi), xtol=1e-14, rtol=8.9e-16)
    seg.lambda_theta = float(root)
    return float(root)


def solve_equilibrium_linearized(seg: VesselSegment, P: float,
                                 mat: LinearizedMaterial,
                                 tol_factor: float = 1e-9, max_iter: int = 40
                                 ) -> tuple[float, np.ndarray]:
    """Stretch update from the linearized material (production path).

    Solves the 2x2 system in the incremental stretches (lambda*_r,
    lambda*_theta): hoop Laplace balance and the radial closure
    sigma_rr = -P/2, with the dilational penalty steering det F* to J*.
    Returns (updated lambda_theta, F*).
    """
    lam_n = seg.lambda_theta
    det_Fn = float(np.linalg.det(seg.point.F))

    def residuals(x):
        F_star = np.diag([x[0], x[1], 1.0])
        sigma = linearized_cauchy(mat, F_star)
        lam_new = x[1] * lam_n
        det_new = x[0] * x[1] * det_Fn
        hoop = P * (lam_new * seg.a0) / (seg.h0 * det_new / lam_new)
        return np.array([sigma[1, 1] - hoop, sigma[0, 0] + 0.5 * P])

    scale = max(_residual_scale(seg, P, mat.J_star),
                float(np.abs(mat.sigma_ref).max()), 1.0)
    tol = tol_factor * scale
    x = np.full(2, mat.J_star ** (1.0 / 3.0))  # strain-free growth as the guess
    r = residuals(x)
    for _ in range(max_iter):
        if np.abs(r).max() < tol:
            F_star = np.diag([x[0], x[1], 1.0])
            return float(x[1] * lam_n), F_star
        Jac = np.empty((2, 2))  # numerical Jacobian; the system is 2x2 and smooth
        for j in range(2):
            dx = 1e-7 * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += dx
            Jac[:, j] = (residuals(xp) - r) / dx
        try:
            step = np.linalg.solve(Jac, -r)
        except np.linalg.LinAlgError as exc:
            raise EquilibriumError("singular Jacobian in the linearized wall solve",
                                   diagnostics={"x": x.tolist()}) from exc
        alpha = 1.0
        accepted = False
        for _ in range(12):
            x_t = x + alpha * step
            if x_t.min() > 0.05:
                r_t = residuals(x_t)
                if np.abs(r_t).max() < np.abs(r).max() or np.abs(r_t).max() < tol:
                    x, r = x_t, r_t
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            break
    if np.abs(r).max() < tol:
        F_star = np.diag([x[0], x[1], 1.0])
        return float(x[1] * lam_n), F_star
    raise EquilibriumError("linearized wall solve did not converge",
                           diagnostics={"x": x.tolist(), "residual": r.tolist(),
                                        "tol": tol})
