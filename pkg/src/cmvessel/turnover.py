"""Mass production stimuli and survival functions for all constituent classes.

Constituent kinds
-----------------
mechano        produced in proportion to stress/shear deviations, removed at a
               deviation-modulated first-order rate
inflammatory   produced on a gamma-shaped burden curve, removed at a
               burden-modulated first-order rate
elastin        never produced, never removed (perinatal deposition only)
polymer        never produced, initial cohort decays on a sigmoid
polymer-ground never produced, initial cohort decays exponentially to a
               residual fraction after a delay

Deviations are dimensionless: delta_sigma = sigma_f/sigma_h - 1 and
delta_tau = tau_f/tau_h - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MECHANO = "mechano"
INFLAMMATORY = "inflammatory"
ELASTIN = "elastin"
POLYMER = "polymer"
POLYMER_GROUND = "polymer-ground"

_KINDS = (MECHANO, INFLAMMATORY, ELASTIN, POLYMER, POLYMER_GROUND)

STIMULUS_FLOOR = 0.1

_EXP_CLIP = 700.0  # exp argument ceiling; beyond it the sigmoid is numerically 0/1


@dataclass(frozen=True)
class TurnoverParams:
    kind: str
    k_h: float = 0.0          # 1/day, basal removal rate
    K_sigma: float = 0.0      # production gain on intramural stress deviation
    K_tau: float = 0.0        # production gain on wall shear deviation
    K_D_sigma: float = 0.0    # degradation gain on intramural stress deviation
    K_D_tau: float = 0.0      # degradation gain on wall shear deviation
    sigma_h: float = 0.0      # kPa, table homeostatic intramural stress
    tau_h: float = 0.0        # Pa, table homeostatic wall shear stress
    basal_rate: float | None = None  # kg/(m^3 day); overrides rho_R(0)*k_h
    # inflammatory burden parameters
    K_i: float = 0.0
    delta_i: float = 0.0      # 1/day, burden rate parameter
    beta_i: float = 0.0       # burden shape parameter
    # polymer sigmoid parameters
    k_p: float = 0.0          # 1/day
    zeta: float = 0.0
    gamma: float = 0.0
    # ground-matrix parameters
    eps_R_min: float = 0.0
    s_d: float = 0.0          # day, degradation onset delay

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown turnover kind {self.kind!r}")
        if self.kind in (MECHANO, INFLAMMATORY) and self.k_h <= 0.0:
            raise ValueError("first-order removal requires k_h > 0")
        if self.kind == INFLAMMATORY and not (self.beta_i > 1.0 and self.delta_i > 0.0):
            raise ValueError("inflammatory burden requires beta > 1 and delta > 0")


@dataclass(frozen=True)
class StimulusInput:
    delta_sigma: float
    delta_tau: float
    s: float = 0.0  # day, time since implant / start


def stimulus_mechano(p: TurnoverParams, inp: StimulusInput) -> float:
    """Linearized mechano-mediated stimulus with its minimum floor."""
    raw = 1.0 + p.K_sigma * inp.delta_sigma - p.K_tau * inp.delta_tau
    return max(STIMULUS_FLOOR, raw)


def inflammatory_burden(p: TurnoverParams, s: float) -> float:
    """Normalized burden Gamma(s)/Gamma_max in [0, 1], peaking at (beta-1)/delta."""
    if s < 0.0:
        raise ValueError("time since implant must be non-negative")
    if s == 0.0:
        return 0.0
    bm1 = p.beta_i - 1.0
    s_peak = bm1 / p.delta_i
    # Gamma(s)/Gamma(s_peak); the delta^beta prefactors cancel.
    log_ratio = bm1 * (np.log(s) - np.log(s_peak)) - p.delta_i * (s - s_peak)
    return float(np.exp(log_ratio))


def stimulus_inflammatory(p: TurnoverParams, s: float) -> float:
    """Immuno-mediated stimulus K_i * Gamma(s)/Gamma_max."""
    return p.K_i * inflammatory_burden(p, s)


def production_rate(p: TurnoverParams, rho_R_now: float, rho_R_0: float,
                    upsilon: float) -> float:
    """Referential mass production rate m_R (kg/(m^3 day)).

    Mechano-mediated constituents produce at the floored nominal rate
    max(rho_R(tau) k_h, basal) so that vanished constituents can still be
    (re)seeded; inflammatory ones produce at their mechano counterpart's
    basal rate; elastin and polymer classes are never produced.
    """
    if rho_R_now < 0.0 or rho_R_0 < 0.0:
        raise ValueError("densities must be non-negative")
    if p.kind == MECHANO:
        basal = p.basal_rate if p.basal_rate is not None else rho_R_0 * p.k_h
        return max(rho_R_now * p.k_h, basal) * upsilon
    if p.kind == INFLAMMATORY:
        if p.basal_rate is None:
            raise ValueError("inflammatory production requires the paired basal rate")
        return p.basal_rate * upsilon
    return 0.0


def removal_rate(p: TurnoverParams, delta_sigma: float, delta_tau: float,
                 s: float) -> float:
    """Pointwise removal rate k(t) >= 0 entering the survival integrals."""
    if p.kind == MECHANO:
        k = p.k_h * (1.0 + p.K_D_sigma * delta_sigma + p.K_D_tau * delta_tau)
        return max(0.0, k)
    if p.kind == INFLAMMATORY:
        return p.k_h * (1.0 + inflammatory_burden(p, s))
    return 0.0


def survival_fraction(p: TurnoverParams, tau: float, s: float,
                      times: np.ndarray | None = None,
                      delta_sigma: np.ndarray | None = None,
                      delta_tau: np.ndarray | None = None) -> float:
    """Fraction q(s, tau) of mass deposited at tau surviving to s.

    The removal-rate integral is evaluated by the trapezoidal rule on the
    stored deviation grid, with piecewise-linear interpolation of the
    deviations at the interval ends. Elastin survives unconditionally.
    """
    if s < tau:
        raise ValueError(f"survival requires s >= tau, got tau={tau}, s={s}")
    if p.kind == ELASTIN:
        return 1.0
    if p.kind in (POLYMER, POLYMER_GROUND):
        return 1.0  # no deposited cohorts; initial-cohort decay lives in Q(s)
    if s == tau:
        return 1.0
    if p.kind == INFLAMMATORY or (p.K_D_sigma == 0.0 and p.K_D_tau == 0.0):
        # deviation-independent rate: integrate k(t) on a grid spanning [tau, s]
        if p.kind == MECHANO:
            return float(np.exp(-p.k_h * (s - tau)))
        grid = _integration_grid(times, tau, s)
        k = np.array([removal_rate(p, 0.0, 0.0, t) for t in grid])
        return float(np.exp(-np.trapezoid(k, grid)))
    grid = _integration_grid(times, tau, s)
    dsig = np.interp(grid, times, delta_sigma)
    dtau = np.interp(grid, times, delta_tau)
    k = np.maximum(0.0, p.k_h * (1.0 + p.K_D_sigma * dsig + p.K_D_tau * dtau))
    return float(np.exp(-np.trapezoid(k, grid)))


def _integration_grid(times: np.ndarray | None, tau: float, s: float) -> np.ndarray:
    if times is None:
        return np.linspace(tau, s, 101)
    inner = times[(times > tau) & (times < s)]
    return np.concatenate(([tau], inner, [s]))


def initial_cohort_survival(p: TurnoverParams, s: float,
                            times: np.ndarray | None = None,
                            delta_sigma: np.ndarray | None = None,
                            delta_tau: np.ndarray | None = None) -> float:
    """Fraction Q(s) of the initial mass cohort surviving to s."""
    if s < 0.0:
        raise ValueError("time must be non-negative")
    if p.kind == ELASTIN:
        return 1.0
    if p.kind == POLYMER:
        num = 1.0 + np.exp(-p.k_p * p.zeta)
        arg = min(_EXP_CLIP, p.k_p * p.gamma * (s - p.zeta / p.gamma))
        return float(num / (1.0 + np.exp(arg)))
    if p.kind == POLYMER_GROUND:
        if s < p.s_d:
            return 1.0
        return float((1.0 - p.eps_R_min) * np.exp(-p.k_h * (s - p.s_d)) + p.eps_R_min)
    return survival_fraction(p, 0.0, s, times, delta_sigma, delta_tau)
