"""Five-way Lie-Trotter splitting baseline.

One step composes, in order: diffraction (Crank-Nicolson in sigma with the
trapezoidal rule in theta), Burgers nonlinearity (Godunov flux), axial
convection and absorption (one fused frequency-space multiplier), and
transverse convection (Lax-Wendroff).  The rho axis is closed with
homogeneous Neumann conditions imposed through mirrored ghost nodes
(V_{-1} = V_1, V_{N+1} = V_{N-1}); the theta axis is periodic.

The diffraction stage is sequential in the theta index: the trapezoidal
sum at stage k needs every already-updated stage l < k, so stage k re-sums
its prefix and the per-step cost grows as O(N_rho * N_theta^2).  This is
the dominant cost of the solver and the reason it falls behind the
spectral integrator on refined grids.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from numba import njit, prange

from . import parallel
from .errors import BudgetExceededError, CflViolationError, InstabilityError
from .grid import TWO_PI, DomainConfig, Field2D
from .reports import RunReport
from .turbulence import VelocityFields


@dataclass
class CflReport:
    """Margins of the two explicit-step stability bounds.

    A margin is the allowed step bound divided by the actual value;
    margins >= 1 pass.  The theta bound comes from the Godunov step
    (B*vmax*dsigma <= dtheta), the rho bound from Lax-Wendroff
    (|U_perp|max*dsigma <= drho).
    """

    burgers_margin: float
    transverse_margin: float
    v_max_bound: float
    u_perp_max: float
    n_theta_allowed: float
    n_rho_allowed: float

    @property
    def passed(self) -> bool:
        return self.burgers_margin >= 1.0 and self.transverse_margin >= 1.0

    def __str__(self) -> str:
        return (
            f"CFL burgers margin {self.burgers_margin:.3f} "
            f"(N_theta <= {self.n_theta_allowed:.1f}), "
            f"transverse margin {self.transverse_margin:.3f} "
            f"(N_rho <= {self.n_rho_allowed:.1f}): "
            f"{'pass' if self.passed else 'FAIL'}"
        )


def check_cfl_splitting(config: DomainConfig, v_max_bound: float = 5.0,
                        u_perp_max: float = 0.05) -> CflReport:
    """Evaluate B*vmax*dsigma <= dtheta and |U_perp|*dsigma <= drho."""
    db = config.B * v_max_bound * config.d_sigma
    dt = u_perp_max * config.d_sigma
    burgers_margin = config.d_theta / db if db > 0 else np.inf
    transverse_margin = config.d_rho / dt if dt > 0 else np.inf
    n_theta_allowed = config.N_theta * burgers_margin
    n_rho_allowed = config.N_rho * transverse_margin
    return CflReport(burgers_margin, transverse_margin, v_max_bound,
                     u_perp_max, n_theta_allowed, n_rho_allowed)


@njit(parallel=True, cache=True)
def _diffraction_sweep(v0, gamma, c, out):
    # Crank-Nicolson + trapezoid sweep, sequential in k.  gamma multiplies
    # the accumulated second differences; c = gamma/2 is the off-diagonal
    # weight from the half trapezoid weight of the l = k term.  The
    # tridiagonal system (1+2c on the diagonal) is strictly diagonally
    # dominant, so the Thomas factorization below cannot break down.
    n_rho, n_theta = v0.shape
    d2n = np.empty((n_rho, n_theta), v0.dtype)
    for j in prange(n_rho):
        jm = 1 if j == 0 else j - 1
        jp = n_rho - 2 if j == n_rho - 1 else j + 1
        for l in range(n_theta):
            d2n[j, l] = v0[jp, l] - 2.0 * v0[j, l] + v0[jm, l]

    # stage k = 0: zero-width trapezoid, field unchanged
    for j in range(n_rho):
        out[j, 0] = v0[j, 0]

    # running sum over updated stages: 1/2 * d2p[:,0] + sum_{1<=l<k} d2p[:,l]
    d2p_col = np.empty(n_rho, v0.dtype)
    for j in range(n_rho):
        jm = 1 if j == 0 else j - 1
        jp = n_rho - 2 if j == n_rho - 1 else j + 1
        d2p_col[j] = out[jp, 0] - 2.0 * out[j, 0] + out[jm, 0]
    sum_prev = 0.5 * d2p_col

    # constant-coefficient Thomas factorization, shared by every stage
    lower = np.full(n_rho, -c)
    upper = np.full(n_rho, -c)
    lower[n_rho - 1] = -2.0 * c
    upper[0] = -2.0 * c
    diag = np.empty(n_rho, v0.dtype)
    w = np.empty(n_rho, v0.dtype)
    diag[0] = 1.0 + 2.0 * c
    for j in range(1, n_rho):
        w[j] = lower[j] / diag[j - 1]
        diag[j] = (1.0 + 2.0 * c) - w[j] * upper[j - 1]

    rhs = np.empty(n_rho, v0.dtype)
    for k in range(1, n_theta):
        # explicit side: re-sum the trapezoid prefix of the old field
        for j in prange(n_rho):
            s = 0.5 * (d2n[j, 0] + d2n[j, k])
            for l in range(1, k):
                s += d2n[j, l]
            rhs[j] = v0[j, k] + gamma * (s + sum_prev[j])
        # Thomas solve for stage k
        for j in range(1, n_rho):
            rhs[j] -= w[j] * rhs[j - 1]
        out[n_rho - 1, k] = rhs[n_rho - 1] / diag[n_rho - 1]
        for j in range(n_rho - 2, -1, -1):
            out[j, k] = (rhs[j] - upper[j] * out[j + 1, k]) / diag[j]
        # fold the fresh stage into the running updated-stage sum
        for j in prange(n_rho):
            jm = 1 if j == 0 else j - 1
            jp = n_rho - 2 if j == n_rho - 1 else j + 1
            sum_prev[j] += out[jp, k] - 2.0 * out[j, k] + out[jm, k]


def step_diffraction_cn(v: np.ndarray, d_sigma: float, d_rho: float,
                        d_theta: float) -> np.ndarray:
    """Diffraction stage on a closed (Neumann) rho axis."""
    gamma = d_sigma * d_theta / (8.0 * np.pi * d_rho ** 2)
    c = 0.5 * gamma
    out = np.empty_like(v)
    _diffraction_sweep(v, gamma, c, out)
    return out


def godunov_flux(u_l, u_r, B: float):
    """Exact Riemann flux for the concave flux g(u) = -(B/2) u^2."""
    u_l = np.asarray(u_l, dtype=np.float64)
    u_r = np.asarray(u_r, dtype=np.float64)
    half_b = 0.5 * B
    minimum = -half_b * np.maximum(u_l * u_l, u_r * u_r)
    straddle = (u_r <= 0.0) & (u_l >= 0.0)
    maximum = np.where(straddle, 0.0, -half_b * np.minimum(u_l * u_l, u_r * u_r))
    out = np.where(u_l <= u_r, minimum, maximum)
    return float(out) if out.ndim == 0 else out


def step_burgers_godunov(v: np.ndarray, B: float, d_sigma: float,
                         d_theta: float) -> np.ndarray:
    """Conservative Godunov update of the Burgers stage, periodic in theta."""
    v_r = np.roll(v, -1, axis=1)
    flux_right = godunov_flux(v, v_r, B)          # F(V_k, V_{k+1})
    flux_left = np.roll(flux_right, 1, axis=1)    # F(V_{k-1}, V_k)
    return v - (d_sigma / d_theta) * (flux_right - flux_left)


def step_axial_absorption_spectral(v: np.ndarray, u_par_col: np.ndarray,
                                   A: float, d_sigma: float,
                                   theta_span: float,
                                   workers: int = 1) -> np.ndarray:
    """Fused axial-convection/absorption multiplier in theta-frequency space.

    Mode m is scaled by exp(i*omega_m*2pi*Q_j - A*omega_m^2*dsigma) with
    omega_m = 2pi*m/theta_span and Q_j = U_par(sigma^n, rho_j)*dsigma (left
    endpoint quadrature of the sigma integral).
    """
    n_theta = v.shape[1]
    omega = TWO_PI * np.arange(n_theta // 2 + 1) / theta_span
    q = u_par_col * d_sigma
    mult = np.exp(1j * TWO_PI * q[:, None] * omega[None, :]
                  - A * d_sigma * omega[None, :] ** 2)
    vhat = sfft.rfft(v, axis=1, workers=workers)
    return sfft.irfft(vhat * mult, n=n_theta, axis=1, workers=workers)


def step_transverse_lw(v: np.ndarray, u_perp_col: np.ndarray,
                       du_perp_dsigma_col: np.ndarray,
                       du_perp_drho_col: np.ndarray, d_sigma: float,
                       d_rho: float) -> np.ndarray:
    """Lax-Wendroff update of the transverse convection stage.

    Centered differences in rho with mirrored Neumann ghosts; the
    coefficient derivatives enter through the second-order Taylor terms.
    """
    padded = np.pad(v, ((1, 1), (0, 0)), mode="reflect")
    d0 = (padded[2:] - padded[:-2]) / (2.0 * d_rho)
    d2 = (padded[2:] - 2.0 * v + padded[:-2]) / (d_rho ** 2)
    u = u_perp_col[:, None]
    du_ds = du_perp_dsigma_col[:, None]
    du_dr = du_perp_drho_col[:, None]
    rhs = (-u * d0
           - 0.5 * d_sigma * du_ds * d0
           + 0.5 * d_sigma * u * du_dr * d0
           + 0.5 * d_sigma * (u * u) * d2)
    return v + d_sigma * rhs


@dataclass
class SplittingState:
    """Marched field on the closed rho grid plus the current step index."""

    field: Field2D
    sigma_index: int = 0


def lie_step(state: SplittingState, fields: VelocityFields,
             config: DomainConfig, workers: int = 1) -> SplittingState:
    """One Lie-Trotter step: diffraction, Burgers, axial+absorption, transverse."""
    n = state.sigma_index
    v = state.field.values
    v = step_diffraction_cn(v, config.d_sigma, config.d_rho, config.d_theta)
    v = step_burgers_godunov(v, config.B, config.d_sigma, config.d_theta)
    v = step_axial_absorption_spectral(v, fields.u_par[n], config.A,
                                       config.d_sigma, config.theta_span,
                                       workers)
    v = step_transverse_lw(v, fields.u_perp[n], fields.du_perp_dsigma[n],
                           fields.du_perp_drho[n], config.d_sigma,
                           config.d_rho)
    if not np.all(np.isfinite(v)):
        raise InstabilityError(n * config.d_sigma, float(np.max(np.abs(v))))
    return SplittingState(Field2D(v), n + 1)


def run_splitting(config: DomainConfig, v0: Field2D, fields: VelocityFields,
                  snapshot_sigmas=None, threads: int = 1, guard: float = 10.0,
                  max_seconds: float | None = None, cfl: str = "warn",
                  v_max_bound: float = 5.0,
                  max_steps: int | None = None) -> RunReport:
    """March the splitting solver to sigma = Sigma.

    ``v0`` lives on the closed rho grid: shape (N_rho+1, N_theta).
    ``max_steps`` truncates the march (benchmarking) at the set's d_sigma.
    """
    n_nodes = config.N_rho + 1
    n_steps = config.N_sigma if max_steps is None else min(config.N_sigma, max_steps)
    values = v0.values if isinstance(v0, Field2D) else np.asarray(v0)
    if values.shape != (n_nodes, config.N_theta):
        raise ValueError(
            f"initial field shape {values.shape} does not match the closed "
            f"grid ({n_nodes}, {config.N_theta})"
        )
    if fields.shape[0] < n_steps + 1 or fields.shape[1] < n_nodes:
        raise ValueError("velocity fields do not cover the run grid")

    u_perp_max = float(np.max(np.abs(fields.u_perp)))
    report = check_cfl_splitting(config, v_max_bound, u_perp_max)
    if not report.passed:
        if cfl == "error":
            raise CflViolationError(str(report))
        warnings.warn(f"CFL check failed: {report}", stacklevel=2)

    eff_threads = parallel.resolve_threads(threads)
    from .exprk import _snapshot_steps

    plan = _snapshot_steps(config, snapshot_sigmas)
    snapshots: dict[float, Field2D] = {}
    state = SplittingState(Field2D(np.array(values, dtype=np.float64)), 0)
    step_seconds = np.zeros(n_steps)
    max_abs = float(np.max(np.abs(values)))
    if 0 in plan:
        snapshots[plan[0]] = state.field.copy()
    t_start = time.perf_counter()

    for n in range(n_steps):
        t0 = time.perf_counter()
        state = lie_step(state, fields, config, workers=eff_threads)
        step_seconds[n] = time.perf_counter() - t0
        m = float(np.max(np.abs(state.field.values)))
        if not np.isfinite(m) or m > guard:
            raise InstabilityError(state.sigma_index * config.d_sigma, m)
        max_abs = max(max_abs, m)
        if state.sigma_index in plan:
            snapshots[plan[state.sigma_index]] = state.field.copy()
        if max_seconds is not None and time.perf_counter() - t_start > max_seconds:
            raise BudgetExceededError(
                f"exceeded {max_seconds:.0f} s at step {n + 1}/{n_steps}"
            )

    return RunReport(
        solver="splitting",
        n_steps=n_steps,
        d_sigma=config.d_sigma,
        wall_seconds=time.perf_counter() - t_start,
        max_abs_v=max_abs,
        final=state.field,
        snapshots=snapshots,
        step_seconds=step_seconds,
        threads=eff_threads,
    )
