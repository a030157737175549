"""Domain configuration, uniform grids, field containers, and norms.

Conventions
-----------
* Fields are stored row-major with rho as the outer (first) axis and theta
  as the inner (second) axis, so theta-direction transforms operate on
  contiguous memory.
* Periodic axes store N points; the right endpoint node is excluded from
  the unknown set.  The splitting solver's Neumann rho axis stores N+1
  points (both interval endpoints present); use :func:`rho_nodes_closed`.
* All quantities are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DomainConfig:
    """Computational domain, grid resolution, and PDE coefficients.

    Defaults correspond to the Set-1 production grid: propagation range
    [0, 120], transverse range [0, 400], retarded time [-13 pi, 15 pi],
    absorption A = 3.4e-4 and quadratic nonlinearity B = 0.05, with the
    region of interest rho in [133, 267] and theta in [0, 15 pi].
    """

    Sigma: float = 120.0
    rho_min: float = 0.0
    rho_max: float = 400.0
    theta_min: float = -13.0 * np.pi
    theta_max: float = 15.0 * np.pi
    N_sigma: int = 300
    N_rho: int = 1250
    N_theta: int = 448
    A: float = 3.4e-4
    B: float = 0.05
    roi_rho: tuple[float, float] = (133.0, 267.0)
    roi_theta: tuple[float, float] = (0.0, 15.0 * np.pi)

    def __post_init__(self):
        if not (np.isfinite(self.Sigma) and self.Sigma > 0):
            raise ConfigError(f"Sigma must be positive and finite, got {self.Sigma}")
        if not (np.isfinite(self.rho_min) and np.isfinite(self.rho_max)
                and self.rho_max > self.rho_min):
            raise ConfigError("rho_max must exceed rho_min")
        if not (np.isfinite(self.theta_min) and np.isfinite(self.theta_max)
                and self.theta_max > self.theta_min):
            raise ConfigError("theta_max must exceed theta_min")
        for name in ("N_sigma", "N_rho", "N_theta"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 1:
                raise ConfigError(f"{name} must be a positive integer, got {n!r}")
        if not (np.isfinite(self.A) and self.A >= 0):
            raise ConfigError(f"absorption A must be nonnegative, got {self.A}")
        if not (np.isfinite(self.B) and self.B >= 0):
            raise ConfigError(f"nonlinearity B must be nonnegative, got {self.B}")
        for name, (lo, hi), (dlo, dhi) in (
            ("roi_rho", self.roi_rho, (self.rho_min, self.rho_max)),
            ("roi_theta", self.roi_theta, (self.theta_min, self.theta_max)),
        ):
            if not (dlo <= lo < hi <= dhi):
                raise ConfigError(
                    f"{name}=({lo}, {hi}) is not a subinterval of [{dlo}, {dhi}]"
                )

    @property
    def d_sigma(self) -> float:
        return self.Sigma / self.N_sigma

    @property
    def d_rho(self) -> float:
        return (self.rho_max - self.rho_min) / self.N_rho

    @property
    def d_theta(self) -> float:
        return (self.theta_max - self.theta_min) / self.N_theta

    @property
    def rho_span(self) -> float:
        return self.rho_max - self.rho_min

    @property
    def theta_span(self) -> float:
        return self.theta_max - self.theta_min


@dataclass
class Field2D:
    """Real-valued grid function V(rho_j, theta_k) at fixed sigma.

    ``values`` is C-ordered with shape (n_rho, n_theta): rho outer, theta
    inner.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if v.ndim != 2:
            raise ConfigError(f"Field2D values must be 2-D, got ndim={v.ndim}")
        self.values = v

    @property
    def n_rho(self) -> int:
        return self.values.shape[0]

    @property
    def n_theta(self) -> int:
        return self.values.shape[1]

    def copy(self) -> "Field2D":
        return Field2D(self.values.copy())


@dataclass
class SpectralField2D:
    """Complex Fourier coefficients of a Field2D, both axes periodic.

    Coefficients follow the standard FFT layout: entry (j, k) holds the
    mode with signed integer frequencies given by ``np.fft.fftfreq(n)*n``
    on each axis (rho mode j, theta mode k).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.complex128))
        if c.ndim != 2:
            raise ConfigError(f"SpectralField2D coeffs must be 2-D, got ndim={c.ndim}")
        self.coeffs = c

    @property
    def n_rho(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_theta(self) -> int:
        return self.coeffs.shape[1]


def to_spectral(field: Field2D) -> SpectralField2D:
    """Forward 2-D transform of a real field (both axes periodic)."""
    return SpectralField2D(np.fft.fft2(field.values))


def to_physical(spec: SpectralField2D) -> Field2D:
    """Inverse of :func:`to_spectral`; imaginary residue is discarded."""
    return Field2D(np.fft.ifft2(spec.coeffs).real)


def uniform_nodes(lo: float, step: float, count: int) -> np.ndarray:
    """Nodes lo + i*step for i = 0..count-1, built from the step formula."""
    return lo + step * np.arange(count, dtype=np.float64)


def build_axes(config: DomainConfig):
    """Uniform axes (sigma_nodes, rho_nodes, theta_nodes).

    sigma carries both endpoints (N_sigma+1 nodes); rho and theta follow
    the periodic convention (N nodes, right endpoint excluded).
    """
    sigma = uniform_nodes(0.0, config.d_sigma, config.N_sigma + 1)
    rho = uniform_nodes(config.rho_min, config.d_rho, config.N_rho)
    theta = uniform_nodes(config.theta_min, config.d_theta, config.N_theta)
    return sigma, rho, theta


def rho_nodes_closed(config: DomainConfig) -> np.ndarray:
    """Transverse nodes including both endpoints (Neumann axis, N_rho+1)."""
    return uniform_nodes(config.rho_min, config.d_rho, config.N_rho + 1)


def l2_norm(field: Field2D, d_rho: float, d_theta: float) -> float:
    """Discrete l2 norm sqrt(d_rho*d_theta*sum(u^2))."""
    v = field.values
    if not np.all(np.isfinite(v)):
        raise ValueError("l2_norm: field contains non-finite entries")
    return float(np.sqrt(d_rho * d_theta * np.sum(v * v)))


def relative_error(ref: Field2D, num: Field2D, d_rho: float, d_theta: float) -> float:
    """||ref - num|| / ||ref|| in the discrete l2 norm."""
    if ref.values.shape != num.values.shape:
        raise ValueError(
            f"relative_error: shape mismatch {ref.values.shape} vs {num.values.shape}"
        )
    denom = l2_norm(ref, d_rho, d_theta)
    if denom == 0.0:
        raise ValueError("relative_error: reference field has zero norm")
    diff = Field2D(ref.values - num.values)
    return l2_norm(diff, d_rho, d_theta) / denom


def _range_in(nodes: np.ndarray, lo: float, hi: float):
    """Index range [first, last] of nodes inside the closed interval [lo, hi].

    Computed by floor/ceil on the uniform spacing; a relative fuzz of
    1e-12 absorbs roundoff at interval endpoints.
    """
    if len(nodes) < 2:
        step = 1.0
    else:
        step = nodes[1] - nodes[0]
    fuzz = 1e-12 * max(abs(lo), abs(hi), abs(step))
    first = int(np.ceil((lo - nodes[0] - fuzz) / step))
    last = int(np.floor((hi - nodes[0] + fuzz) / step))
    first = max(first, 0)
    last = min(last, len(nodes) - 1)
    if first > last:
        raise ValueError(f"region [{lo}, {hi}] contains no grid nodes")
    return first, last


def extract_region(field: Field2D, rho_nodes: np.ndarray, theta_nodes: np.ndarray,
                   roi_rho: tuple[float, float], roi_theta: tuple[float, float]):
    """Restrict a field to the nodes inside the closed roi intervals.

    Returns (sub_field, sub_rho_nodes, sub_theta_nodes).  Both roi interval
    endpoints are included whenever they coincide with grid nodes.
    """
    if field.n_rho != len(rho_nodes) or field.n_theta != len(theta_nodes):
        raise ValueError("extract_region: axes do not match field extents")
    j0, j1 = _range_in(rho_nodes, *roi_rho)
    k0, k1 = _range_in(theta_nodes, *roi_theta)
    sub = Field2D(field.values[j0:j1 + 1, k0:k1 + 1].copy())
    return sub, rho_nodes[j0:j1 + 1].copy(), theta_nodes[k0:k1 + 1].copy()
