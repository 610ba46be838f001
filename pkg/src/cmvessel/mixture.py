"""Cohort ledger and heredity-integral evaluation of the mixture response.

A :class:`MaterialPoint` tracks, per constituent, every mass cohort deposited
since time zero together with the kinematic state it was deposited in. All
time integrals (referential density, PK2 stress, material elasticity, removal
hazards, vasomotor tone) are evaluated with the trapezoidal rule on the
growth time grid; the half-weighted endpoints sit at tau = 0 and tau = s.

The initial mass is NOT multiplied by a quadrature weight: the density reads

    rho_R(s) = rho_R(0) Q(s) + trapz_{[0,s]} m_R(tau) q(s,tau) dtau,

i.e. the surviving initial cohort plus the quadrature of deposited cohorts.

Per-cohort cached quantities
----------------------------
A(tau) = F^-1(tau) G R(tau)      constrained-deposition map
H(tau) = R(tau) H0 R(tau)^T      rotated fiber projector
M(tau) = A H A^T,  B(tau) = A A^T reduced stacks fed to the kernels

With these, each cohort's fiber invariant is I4 = C(s) : M(tau) and the
stress/elasticity sums reduce to coefficient-weighted sums of M and M (x) M
(see kernels). Removal is folded into a cumulative hazard K(t) per
constituent so q(s, tau) = exp(K(tau) - K(s)) for every cohort at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels, turnover
from .materials import (
    ActiveStressParams,
    DepositionStretch,
    MaterialModel,
    active_cauchy,
    structural_tensor,
)
from .tensors import I2, check_deformation_gradient, polar_rotation, pushforward_elasticity, pushforward_stress

Q_TRUNCATION = 1e-8  # survival below which cohorts may be dropped (opt-in)


@dataclass(frozen=True)
class ConstituentSpec:
    """Immutable parameter bundle of one constituent."""

    name: str
    material: MaterialModel
    prestretch: DepositionStretch
    turnover: turnover.TurnoverParams
    rho_hat: float                      # kg/m^3, intrinsic density
    phi_0: float                        # initial volume fraction
    active: ActiveStressParams | None = None

    def __post_init__(self):
        if self.rho_hat <= 0.0:
            raise ValueError("intrinsic density must be positive")
        if self.phi_0 < 0.0:
            raise ValueError("initial volume fraction must be non-negative")


@dataclass(frozen=True)
class TimeGrid:
    dt: float       # day
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0.0 or self.n_steps < 0:
            raise ValueError("time grid requires dt > 0 and n_steps >= 0")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)


class Cohort(NamedTuple):
    """Read-only view of one deposited cohort (introspection and tests)."""

    tau: float
    m_R: float
    F_tau: np.ndarray
    A_tau: np.ndarray


class MixtureResponse(NamedTuple):
    S_bar: np.ndarray           # referential PK2 of the mixture, kPa
    sigma_passive: np.ndarray   # pushforward of S_bar, kPa
    sigma_active: np.ndarray    # active muscle contribution, kPa
    sigma_bar: np.ndarray       # deformation-dependent Cauchy (passive+active)
    c_spatial: np.ndarray | None  # spatial elasticity of the mixture, kPa
    J: float


def cohort_cauchy_green(A_tau: np.ndarray, C_s: np.ndarray) -> np.ndarray:
    """Cohort-level right Cauchy-Green tensor A^T C A."""
    return A_tau.T @ C_s @ A_tau


def deposition_tensor(g: DepositionStretch, F_tau: np.ndarray) -> np.ndarray:
    """Deposition map F_G = G R(tau), R from the polar factorization of F(tau)."""
    return g.tensor() @ polar_rotation(F_tau)


def active_stretch(times: np.ndarray, values: np.ndarray, k_act: float, s: float,
                   v_pre: float | None = None) -> float:
    """First-order fading-memory filter of a stretch history.

    Evaluates trapz of k e^{-k (s-t)} values(t) over [times[0], s] plus the
    pre-history plateau v_pre * e^{-k (s - times[0])} (the kernel integrates
    to one over (-inf, s], so a constant history is reproduced exactly up to
    quadrature error in the finite part).
    """
    if len(times) == 0:
        raise ValueError("active stretch filter requires a non-empty history")
    if v_pre is None:
        v_pre = float(values[0])
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    w = k_act * np.exp(-k_act * (s - t))
    finite = float(np.trapezoid(w * v, t)) if len(t) > 1 else 0.0
    return v_pre * float(np.exp(-k_act * (s - t[0]))) + finite


class _ConstituentState:
    """Mutable cohort ledger of one constituent at one material point."""

    def __init__(self, spec: ConstituentSpec, grid: TimeGrid):
        self.spec = spec
        self.G = spec.prestretch.tensor()
        self.is_fiber = spec.material.is_fiber
        self.rho_R0 = spec.phi_0 * spec.rho_hat
        cap = grid.n_steps + 1
        self.n = 0                       # committed cohorts
        self.start = 0                   # first retained cohort (truncation)
        self.tau = np.zeros(cap)
        self.m_R = np.zeros(cap)
        self.J_tau = np.ones(cap)
        self.F_tau = np.zeros((cap, 3, 3))
        self.A_tau = np.zeros((cap, 3, 3))
        self.H_tau = np.zeros((cap, 3, 3))
        # kernel stacks: slot 0 = initial cohort, 1..n = committed, n+1 = endpoint
        self.stack = np.zeros((cap + 2, 3, 3))
        self.K = np.zeros(cap)           # cumulative removal hazard at grid times
        H0 = structural_tensor(spec.material.h0) if self.is_fiber else None
        self.H0 = H0
        self.stack[0] = self._reduced(I2, self.G, H0)
        # provisional endpoint state (current trial time s)
        self.K_s = 0.0
        self.m_R_s = 0.0
        self.rho_s = self.rho_R0
        self.upsilon_s = 0.0
        self.Q_s = 1.0

    def _reduced(self, F_tau: np.ndarray, FG: np.ndarray, H_tau: np.ndarray | None):
        """M = A H A^T (fiber) or B = A A^T (isotropic), A = F^-1(tau) F_G."""
        A = np.linalg.solve(F_tau, FG)
        if self.is_fiber:
            return A @ H_tau @ A.T
        return A @ A.T

    def endpoint_maps(self, F: np.ndarray):
        """A(s), H(s) and the reduced stack entry for a trial current state."""
        R = polar_rotation(F)
        FG = self.G @ R
        A = np.linalg.solve(F, FG)
        H = R @ self.H0 @ R.T if self.is_fiber else None
        M = A @ H @ A.T if self.is_fiber else A @ A.T
        return A, H, M

    def initial_survival(self, s: float) -> float:
        p = self.spec.turnover
        if p.kind in (turnover.MECHANO, turnover.INFLAMMATORY):
            return float(np.exp(-self.K_s))
        return turnover.initial_cohort_survival(p, s)

    def cohort(self, i: int) -> Cohort:
        return Cohort(self.tau[i], self.m_R[i], self.F_tau[i].copy(), self.A_tau[i].copy())


class MaterialPoint:
    """Full mixture state of one wall material point on the growth grid."""

    def __init__(self, constituents: list[ConstituentSpec], grid: TimeGrid,
                 truncate_negligible: bool = False):
        if not constituents:
            raise ValueError("a material point needs at least one constituent")
        self.grid = grid
        self.truncate_negligible = truncate_negligible
        self.constituents = [_ConstituentState(spec, grid) for spec in constituents]
        self.names = [spec.name for spec in constituents]
        active = [c for c in self.constituents if c.spec.active is not None]
        if len(active) > 1:
            raise ValueError("at most one active constituent is supported")
        self.active_state = active[0] if active else None
        self.s = 0.0
        self.idx = 0                       # committed grid index
        self.F = I2.copy()
        self.p = 0.0                       # Lagrange pressure, kPa
        self.sigma_h = 0.0                 # homeostatic targets (set at init)
        self.tau_h = 0.0
        cap = grid.n_steps + 1
        self.t_hist = np.zeros(cap)
        self.dsig_hist = np.zeros(cap)
        self.dtau_hist = np.zeros(cap)
        self.v_act_hist = np.ones(cap)     # C(t):H0 history for the tone filter
        self.dsig_s = 0.0                  # trial deviations at the endpoint
        self.dtau_s = 0.0
        self.lambda_act = 1.0

    # ------------------------------------------------------------------ setup

    def initialize(self, delta_sigma0: float = 0.0, delta_tau0: float = 0.0):
        """Commit the time-zero cohort so the heredity quadrature can start."""
        if self.idx != 0 or self.constituents[0].n != 0:
            raise RuntimeError("material point already initialized")
        self.dsig_s = delta_sigma0
        self.dtau_s = delta_tau0
        self._update_endpoint_biology()
        self._commit_endpoint()

    # -------------------------------------------------------------- iteration

    def begin_step(self):
        """Advance the provisional endpoint to s + dt, keeping F(s) = F(tau)."""
        self.s = self.grid.dt * (self.idx + 1)
        self._update_endpoint_biology()

    def update_biology(self, delta_sigma: float, delta_tau: float):
        """Set trial deviations at the endpoint and refresh densities/hazards."""
        self.dsig_s = delta_sigma
        self.dtau_s = delta_tau
        self._update_endpoint_biology()

    def _update_endpoint_biology(self):
        s = self.s
        dt_end = s - self.grid.dt * self.idx
        for cs in self.constituents:
            p = cs.spec.turnover
            # cumulative hazard up to the provisional endpoint
            if self.idx == 0 and s == 0.0:
                cs.K_s = 0.0
            else:
                t_prev = self.grid.dt * self.idx
                k_prev = turnover.removal_rate(
                    p, self.dsig_hist[self.idx], self.dtau_hist[self.idx], t_prev)
                k_now = turnover.removal_rate(p, self.dsig_s, self.dtau_s, s)
                cs.K_s = cs.K[self.idx] + 0.5 * dt_end * (k_prev + k_now)
            cs.Q_s = cs.initial_survival(s)
            # production stimulus at the endpoint
            if p.kind == turnover.MECHANO:
                ups = turnover.stimulus_mechano(
                    p, turnover.StimulusInput(self.dsig_s, self.dtau_s, s))
            elif p.kind == turnover.INFLAMMATORY:
                ups = turnover.stimulus_inflammatory(p, s)
            else:
                ups = 0.0
            cs.upsilon_s = ups
            self._solve_endpoint_density(cs, ups)

    def _solve_endpoint_density(self, cs: _ConstituentState, upsilon: float):
        """Endpoint production and density, closing the m_R(s) <-> rho_R(s) loop.

        The endpoint enters its own trapezoid weight, so for mechano kinds
        rho(s) = base + w k Upsilon rho(s) on the unfloored branch; both
        branches are linear and solved exactly.
        """
        p = cs.spec.turnover
        base = cs.rho_R0 * cs.Q_s + self._committed_quadrature(cs)
        if self.s == 0.0 or p.kind in (turnover.ELASTIN, turnover.POLYMER,
                                       turnover.POLYMER_GROUND):
            # no endpoint weight at s = 0 (empty integral); passive kinds never produce
            if p.kind == turnover.MECHANO:
                basal = p.basal_rate if p.basal_rate is not None else cs.rho_R0 * p.k_h
                cs.m_R_s = max(base * p.k_h, basal) * upsilon
            elif p.kind == turnover.INFLAMMATORY:
                cs.m_R_s = turnover.production_rate(p, base, cs.rho_R0, upsilon)
            else:
                cs.m_R_s = 0.0
            cs.rho_s = base
            return
        w_end = 0.5 * (self.s - self.grid.dt * self.idx)
        if p.kind == turnover.INFLAMMATORY:
            cs.m_R_s = turnover.production_rate(p, base, cs.rho_R0, upsilon)
            cs.rho_s = base + w_end * cs.m_R_s
            return
        # mechano: try the unfloored branch first
        basal = p.basal_rate if p.basal_rate is not None else cs.rho_R0 * p.k_h
        denom = 1.0 - w_end * p.k_h * upsilon
        if denom > 0.0:
            rho = base / denom
            if rho * p.k_h >= basal:
                cs.m_R_s = rho * p.k_h * upsilon
                cs.rho_s = rho
                return
        cs.m_R_s = basal * upsilon
        cs.rho_s = base + w_end * cs.m_R_s

    def _committed_quadrature(self, cs: _ConstituentState) -> float:
        """sum of w_i m_R(tau_i) q(s, tau_i) over committed cohorts (endpoint excluded)."""
        if cs.n == 0:
            return 0.0
        w = self._quadrature_weights(cs)[:-1]
        q = np.exp(cs.K[cs.start:cs.n] - cs.K_s)
        return float(np.sum(w * cs.m_R[cs.start:cs.n] * q))

    def _quadrature_weights(self, cs: _ConstituentState) -> np.ndarray:
        """Trapezoid weights over the retained committed nodes plus the endpoint."""
        n_nodes = (cs.n - cs.start) + 1
        w = np.full(n_nodes, self.grid.dt)
        w[0] *= 0.5
        w[-1] = 0.5 * (self.s - self.grid.dt * self.idx)
        if n_nodes == 2:
            # single panel [t_idx, s]
            w[0] = w[-1]
        return w

    def commit_step(self):
        """Freeze the endpoint: new cohort, hazards, deviations, filter history."""
        self._commit_endpoint()

    def _commit_endpoint(self):
        s = self.s
        idx_new = 0 if (self.idx == 0 and self.constituents[0].n == 0) else self.idx + 1
        J = check_deformation_gradient(self.F)
        C = self.F.T @ self.F
        for cs in self.constituents:
            A, H, M = cs.endpoint_maps(self.F)
            i = cs.n
            cs.tau[i] = s
            cs.m_R[i] = cs.m_R_s
            cs.J_tau[i] = J
            cs.F_tau[i] = self.F
            cs.A_tau[i] = A
            if cs.is_fiber:
                cs.H_tau[i] = H
            cs.stack[i + 1] = M
            cs.K[idx_new] = cs.K_s
            cs.n += 1
            if self.truncate_negligible:
                q = np.exp(cs.K[cs.start:cs.n] - cs.K_s)
                drop = int(np.searchsorted(q, Q_TRUNCATION))
                cs.start += drop
        self.t_hist[idx_new] = s
        self.dsig_hist[idx_new] = self.dsig_s
        self.dtau_hist[idx_new] = self.dtau_s
        if self.active_state is not None:
            self.v_act_hist[idx_new] = float(
                np.einsum("ij,ij->", C, self.active_state.H0))
        self.idx = idx_new

    # ------------------------------------------------------------- evaluation

    def _stress_weights(self, cs: _ConstituentState) -> np.ndarray:
        """Weights for the kernel stacks: [initial cohort, committed..., endpoint]."""
        w_quad = self._quadrature_weights(cs)
        q = np.exp(cs.K[cs.start:cs.n] - cs.K_s)
        v = np.empty(cs.n - cs.start + 2)
        v[0] = cs.rho_R0 * cs.Q_s
        v[1:-1] = w_quad[:-1] * cs.m_R[cs.start:cs.n] * q
        v[-1] = w_quad[-1] * cs.m_R_s
        return v / cs.spec.rho_hat

    def assemble(self, F: np.ndarray | None = None,
                 with_tangent: bool = True) -> MixtureResponse:
        """Evaluate the mixture response at a trial F with frozen biology."""
        if F is None:
            F = self.F
        J = check_deformation_gradient(F)
        C = F.T @ F
        S = np.zeros((3, 3))
        C4 = np.zeros((3, 3, 3, 3)) if with_tangent else None
        lam_act = None
        for cs in self.constituents:
            _, _, M_end = cs.endpoint_maps(F)
            cs.stack[cs.n + 1] = M_end
            v = self._stress_weights(cs)
            stacks = np.concatenate((cs.stack[0:1], cs.stack[cs.start + 1:cs.n + 2]))
            if cs.is_fiber:
                mat = cs.spec.material
                s_c, c4_c = kernels.fiber_assemble(stacks, v, C, mat.c1, mat.c2,
                                                   with_tangent)
                S += s_c
                if with_tangent:
                    C4 += c4_c
            else:
                S += kernels.iso_assemble(stacks, v, cs.spec.material.c)
        sigma_passive = pushforward_stress(F, S, J)
        sigma_active = np.zeros((3, 3))
        if self.active_state is not None and self.active_state.spec.active.T_max > 0.0:
            cs = self.active_state
            lam_act = self._active_stretch_endpoint(C, cs)
            phi_m = cs.rho_s / cs.spec.rho_hat
            sigma_active = active_cauchy(cs.spec.active, phi_m, lam_act,
                                         self.dtau_s, F, cs.H0)
        c_spatial = pushforward_elasticity(F, C4, J) if with_tangent else None
        sigma_bar = sigma_passive + sigma_active
        if lam_act is not None:
            self.lambda_act = lam_act
        return MixtureResponse(S, sigma_passive, sigma_active, sigma_bar, c_spatial, J)

    def _active_stretch_endpoint(self, C: np.ndarray, cs: _ConstituentState) -> float:
        k = cs.spec.active.k_act
        v_s = float(np.einsum("ij,ij->", C, cs.H0))
        n = self.idx + 1
        if self.s > self.t_hist[self.idx]:
            t = np.concatenate((self.t_hist[:n], [self.s]))
            v = np.concatenate((self.v_act_hist[:n], [v_s]))
        else:
            t = self.t_hist[:n]
            v = self.v_act_hist[:n]
        return active_stretch(t, v, k, self.s)

    def cauchy_cohortwise(self, F: np.ndarray | None = None) -> np.ndarray:
        """Deformation-dependent Cauchy stress summed cohort by cohort.

        Evaluates the per-cohort Cauchy stresses (current-volume production
        rates m_R/J(tau), per-cohort Jacobians J(s)/J(tau)) and sums them.
        This is the second route of the dual-path stress identity; the first
        route is the pushforward of :meth:`assemble`'s referential sum.
        """
        if F is None:
            F = self.F
        J_s = check_deformation_gradient(F)
        sigma = np.zeros((3, 3))
        for cs in self.constituents:
            mat = cs.spec.material
            # referential weights [rho0 Q, w_i m_R q_i, w_end m_s] / rho_hat;
            # the current-volume production m(tau) = m_R(tau)/J(tau) divides
            # each deposited-cohort weight by J(tau) below.
            v = self._stress_weights(cs)
            A_end, H_end, _ = cs.endpoint_maps(F)
            n_ret = cs.n - cs.start
            A_all = [cs.G] + [cs.A_tau[i] for i in range(cs.start, cs.n)] + [A_end]
            H_all = None
            if cs.is_fiber:
                H_all = [cs.H0] + [cs.H_tau[i] for i in range(cs.start, cs.n)] + [H_end]
            J_all = [1.0] + [cs.J_tau[i] for i in range(cs.start, cs.n)] + [J_s]
            for j in range(n_ret + 2):
                Fn = F @ A_all[j]               # cohort deformation F(s) A(tau)
                det_Fn = J_s / J_all[j]
                Cn = Fn.T @ Fn
                if cs.is_fiber:
                    I4 = float(np.einsum("ij,ij->", Cn, H_all[j]))
                    x = I4 - 1.0
                    S_hat = mat.c1 * x * np.exp(mat.c2 * x * x) * H_all[j]
                else:
                    S_hat = mat.c * I2
                sigma_hat = (Fn @ S_hat @ Fn.T) / det_Fn
                sigma += (v[j] / J_all[j]) * sigma_hat
        return sigma

    # ---------------------------------------------------------------- queries

    def referential_density(self, name: str) -> float:
        """rho_R of one constituent at the provisional endpoint."""
        cs = self.constituents[self.names.index(name)]
        return cs.rho_s

    def densities(self) -> dict[str, float]:
        return {cs.spec.name: cs.rho_s for cs in self.constituents}

    def upsilons(self) -> dict[str, float]:
        return {cs.spec.name: cs.upsilon_s for cs in self.constituents}

    def volume_ratio_target(self) -> float:
        """J implied by the evolved densities: sum_alpha rho_R^alpha / rho_hat^alpha."""
        return float(sum(cs.rho_s / cs.spec.rho_hat for cs in self.constituents))

    def lagrange_pressure_membrane(self, sigma_bar: np.ndarray, P_lumen: float) -> float:
        """Thin-wall closure p = sigma_bar_rr - (-P/2) so total sigma_rr = -P/2."""
        return float(sigma_bar[0, 0] + 0.5 * P_lumen)

    def total_cauchy(self, sigma_bar: np.ndarray, P_lumen: float) -> np.ndarray:
        p = self.lagrange_pressure_membrane(sigma_bar, P_lumen)
        return -p * I2 + sigma_bar

    def stress_invariant(self, sigma_bar: np.ndarray, P_lumen: float) -> float:
        """Radially averaged first invariant tr(sigma) of the total Cauchy stress."""
        return float(np.trace(self.total_cauchy(sigma_bar, P_lumen)))

    def volume_consistency(self) -> float:
        """|det F - J_target| / det F at the current state."""
        J_kin = float(np.linalg.det(self.F))
        return abs(J_kin - self.volume_ratio_target()) / J_kin
