"""Isotropic 2-D random velocity field built from a sum of Fourier modes.

The field is a superposition of N cosine modes with random phases and
propagation angles, wavenumbers equispaced in [K_min, K_max], and
amplitudes tied to a Gaussian energy spectrum.  Each mode's amplitude
vector is perpendicular to its wave vector, so the field is
incompressible mode by mode.

Sampling is reproducible: phases and angles are drawn from two
independent PCG64 streams spawned from one ``SeedSequence(seed)`` (child
0 feeds the phases, child 1 the angles), which pins the output bitwise
for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .errors import ConfigError


@dataclass(frozen=True)
class TurbulenceParams:
    """Physical parameters of the random velocity field.

    ``k_min``/``k_max`` default to 0.1/L and 9.0/L where L = 4*lam and
    lam = T0*c0.  ``sigma_u`` and ``c0`` are in m/s, ``T0`` in seconds.
    """

    n_modes: int = 500
    sigma_u: float = 3.0
    c0: float = 343.0
    T0: float = 2.0e-2
    k_min: float | None = None
    k_max: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n_modes, (int, np.integer)) or self.n_modes < 1:
            raise ConfigError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        for name in ("sigma_u", "c0", "T0"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.wavenumber_min >= self.wavenumber_max:
            raise ConfigError("k_min must be below k_max")

    @property
    def lam(self) -> float:
        """Length scale lam = T0*c0 (m): initial pulse length."""
        return self.T0 * self.c0

    @property
    def L(self) -> float:
        """Correlation length L = 4*lam (m)."""
        return 4.0 * self.lam

    @property
    def wavenumber_min(self) -> float:
        return 0.1 / self.L if self.k_min is None else self.k_min

    @property
    def wavenumber_max(self) -> float:
        return 9.0 / self.L if self.k_max is None else self.k_max


@dataclass
class TurbulenceSpec:
    """Sampled random modes defining the velocity field.

    Per-mode arrays of equal length: phase in [0, 2pi), angle in [0, 2pi),
    wavenumber magnitude, and the two amplitude-vector components
    (amp1, amp2) = |U~(K)| * (-sin(angle), cos(angle)).  ``c0`` carries the
    normalization applied when the field is evaluated on a grid.
    """

    phases: np.ndarray
    angles: np.ndarray
    wavenumbers: np.ndarray
    amp1: np.ndarray
    amp2: np.ndarray
    lam: float
    c0: float

    @property
    def n_modes(self) -> int:
        return len(self.phases)


@dataclass
class VelocityFields:
    """Dimensionless velocity components sampled on the (sigma, rho) grid.

    All four arrays share the shape (n_sigma_nodes, n_rho_nodes).  The
    derivative tables are the analytic sigma- and rho-derivatives of the
    perpendicular component.
    """

    u_par: np.ndarray
    u_perp: np.ndarray
    du_perp_dsigma: np.ndarray
    du_perp_drho: np.ndarray

    @property
    def shape(self):
        return self.u_par.shape

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.u_par)), np.max(np.abs(self.u_perp))))


def energy_spectrum(k, sigma_u: float, L: float):
    """Gaussian energy spectrum (1/8)*sigma_u^2*K^3*L^4*exp(-(KL/2)^2)."""
    k = np.asarray(k, dtype=np.float64)
    if np.any(k < 0):
        raise ValueError("energy_spectrum: negative wavenumber")
    out = 0.125 * sigma_u**2 * k**3 * L**4 * np.exp(-((k * L / 2.0) ** 2))
    return out if out.ndim else float(out)


def sample_modes(params: TurbulenceParams) -> TurbulenceSpec:
    """Draw the random mode set; deterministic for a fixed seed."""
    n = params.n_modes
    child_phi, child_theta = np.random.SeedSequence(params.seed).spawn(2)
    phases = np.random.Generator(np.random.PCG64(child_phi)).uniform(0.0, 2.0 * np.pi, n)
    angles = np.random.Generator(np.random.PCG64(child_theta)).uniform(0.0, 2.0 * np.pi, n)
    if n == 1:
        wavenumbers = np.array([params.wavenumber_min])
    else:
        wavenumbers = np.linspace(params.wavenumber_min, params.wavenumber_max, n)
    amp = np.sqrt(energy_spectrum(wavenumbers, params.sigma_u, params.L) / n)
    return TurbulenceSpec(
        phases=phases,
        angles=angles,
        wavenumbers=wavenumbers,
        amp1=-amp * np.sin(angles),
        amp2=amp * np.cos(angles),
        lam=params.lam,
        c0=params.c0,
    )


@njit(parallel=True, cache=True)
def _mode_sum(kx, ky, phases, amp1, amp2, lam, sigma_nodes, rho_nodes,
              u_par, u_perp, du_ds, du_dr):
    # cos(K.r + phi) split as cos(a)cos(b) - sin(a)sin(b) with
    # a = kx*lam*sigma and b = ky*lam*rho + phi, so the trig tables are
    # one-dimensional.  Per grid point the modes accumulate in ascending
    # order, and rows are written disjointly: parallel output is bitwise
    # identical to sequential.
    n_sig = sigma_nodes.shape[0]
    n_rho = rho_nodes.shape[0]
    n_modes = kx.shape[0]
    cos_b = np.empty((n_modes, n_rho))
    sin_b = np.empty((n_modes, n_rho))
    for n in prange(n_modes):
        for j in range(n_rho):
            b = ky[n] * lam * rho_nodes[j] + phases[n]
            cos_b[n, j] = np.cos(b)
            sin_b[n, j] = np.sin(b)
    w_ds = -amp2 * kx * lam
    w_dr = -amp2 * ky * lam
    for i in prange(n_sig):
        for n in range(n_modes):
            a = kx[n] * lam * sigma_nodes[i]
            ca = np.cos(a)
            sa = np.sin(a)
            a1 = amp1[n]
            a2 = amp2[n]
            v1 = w_ds[n]
            v2 = w_dr[n]
            for j in range(n_rho):
                c = ca * cos_b[n, j] - sa * sin_b[n, j]
                s = sa * cos_b[n, j] + ca * sin_b[n, j]
                u_par[i, j] += a1 * c
                u_perp[i, j] += a2 * c
                du_ds[i, j] += v1 * s
                du_dr[i, j] += v2 * s


def evaluate_fields(spec: TurbulenceSpec, lam: float, sigma_nodes: np.ndarray,
                    rho_nodes: np.ndarray) -> VelocityFields:
    """Evaluate the mode sum and its analytic derivatives on a grid.

    The cosine argument is the Cartesian form K.(lam*sigma, lam*rho) + phase;
    results are normalized by c0 so solvers consume dimensionless fields.
    """
    sigma_nodes = np.ascontiguousarray(sigma_nodes, dtype=np.float64)
    rho_nodes = np.ascontiguousarray(rho_nodes, dtype=np.float64)
    shape = (len(sigma_nodes), len(rho_nodes))
    u_par = np.zeros(shape)
    u_perp = np.zeros(shape)
    du_ds = np.zeros(shape)
    du_dr = np.zeros(shape)
    kx = spec.wavenumbers * np.cos(spec.angles)
    ky = spec.wavenumbers * np.sin(spec.angles)
    _mode_sum(kx, ky, spec.phases, spec.amp1, spec.amp2, float(lam),
              sigma_nodes, rho_nodes, u_par, u_perp, du_ds, du_dr)
    inv_c0 = 1.0 / spec.c0
    return VelocityFields(u_par * inv_c0, u_perp * inv_c0,
                          du_ds * inv_c0, du_dr * inv_c0)


def _stride_ok(n: int, factor: int) -> bool:
    # Node arrays cover either closed grids (N+1 nodes for N intervals) or
    # open/periodic grids (N nodes); accept a factor that tiles either.
    return (n - 1) % factor == 0 or n % factor == 0


def downsample_fields(fields: VelocityFields, factor_sigma: int,
                      factor_rho: int) -> VelocityFields:
    """Strided sub-sampling, keeping every factor-th node on each axis."""
    n_sig, n_rho = fields.shape
    if factor_sigma < 1 or factor_rho < 1:
        raise ValueError("downsample factors must be >= 1")
    if not _stride_ok(n_sig, factor_sigma):
        raise ValueError(f"factor_sigma={factor_sigma} does not divide extent {n_sig}")
    if not _stride_ok(n_rho, factor_rho):
        raise ValueError(f"factor_rho={factor_rho} does not divide extent {n_rho}")
    sl = (slice(None, None, factor_sigma), slice(None, None, factor_rho))
    return VelocityFields(
        np.ascontiguousarray(fields.u_par[sl]),
        np.ascontiguousarray(fields.u_perp[sl]),
        np.ascontiguousarray(fields.du_perp_dsigma[sl]),
        np.ascontiguousarray(fields.du_perp_drho[sl]),
    )


def zero_fields(n_sigma_nodes: int, n_rho_nodes: int) -> VelocityFields:
    """Quiescent medium (U = 0) of the requested shape."""
    shape = (n_sigma_nodes, n_rho_nodes)
    return VelocityFields(np.zeros(shape), np.zeros(shape),
                          np.zeros(shape), np.zeros(shape))
