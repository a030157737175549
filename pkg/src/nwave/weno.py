"""Fifth-order WENO finite-difference discretization of the advective terms.

Evaluates b(sigma, V) = -div f(V) + dU_perp/drho * V with the flux pair

    f_theta(V) = -2*pi*U_par*V - (B/2)*V^2,      f_rho(V) = U_perp*V,

using dimension-by-dimension WENO5 reconstruction (Jiang-Shu smoothness
indicators, eps = 1e-6) with global Lax-Friedrichs flux splitting per
direction.  Both axes are treated as periodic; stencils wrap.

The per-row kernels write disjoint output rows, so parallel execution is
bitwise identical to sequential execution.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from .grid import TWO_PI

WENO_EPS = 1e-6


@njit(inline="always")
def _upwind_face(a0, a1, a2, a3, a4):
    # Left-biased face value at i+1/2 from f_{i-2}..f_{i+2}.
    b0 = 13.0 / 12.0 * (a0 - 2.0 * a1 + a2) ** 2 + 0.25 * (a0 - 4.0 * a1 + 3.0 * a2) ** 2
    b1 = 13.0 / 12.0 * (a1 - 2.0 * a2 + a3) ** 2 + 0.25 * (a1 - a3) ** 2
    b2 = 13.0 / 12.0 * (a2 - 2.0 * a3 + a4) ** 2 + 0.25 * (3.0 * a2 - 4.0 * a3 + a4) ** 2
    w0 = 0.1 / (WENO_EPS + b0) ** 2
    w1 = 0.6 / (WENO_EPS + b1) ** 2
    w2 = 0.3 / (WENO_EPS + b2) ** 2
    q0 = 2.0 * a0 - 7.0 * a1 + 11.0 * a2
    q1 = -a1 + 5.0 * a2 + 2.0 * a3
    q2 = 2.0 * a2 + 5.0 * a3 - a4
    return (w0 * q0 + w1 * q1 + w2 * q2) / (6.0 * (w0 + w1 + w2))


@njit(parallel=True, cache=True)
def _theta_divergence(v, u_par, b_coef, alpha, inv_dx, out):
    # d/dtheta of the reconstructed theta-flux; flux depends on the row
    # through u_par.  v, out: (n_rho, n_theta), contiguous along theta.
    n_rows, n = v.shape
    half_b = 0.5 * b_coef
    for r in prange(n_rows):
        c = TWO_PI * u_par[r]
        fp = np.empty(n + 5, v.dtype)
        fm = np.empty(n + 5, v.dtype)
        fhat = np.empty(n, v.dtype)
        for idx in range(-2, n + 3):
            pos = idx % n
            vv = v[r, pos]
            g = -c * vv - half_b * vv * vv
            av = alpha * vv
            fp[idx + 2] = 0.5 * (g + av)
            fm[idx + 2] = 0.5 * (g - av)
        for i in range(n):
            plus = _upwind_face(fp[i], fp[i + 1], fp[i + 2], fp[i + 3], fp[i + 4])
            minus = _upwind_face(fm[i + 5], fm[i + 4], fm[i + 3], fm[i + 2], fm[i + 1])
            fhat[i] = plus + minus
        out[r, 0] = (fhat[0] - fhat[n - 1]) * inv_dx
        for i in range(1, n):
            out[r, i] = (fhat[i] - fhat[i - 1]) * inv_dx


@njit(parallel=True, cache=True)
def _rho_divergence(vt, u_perp, alpha, inv_dx, out):
    # d/drho of the reconstructed rho-flux, on transposed storage:
    # vt, out: (n_theta, n_rho); the flux coefficient u_perp varies along
    # the stencil direction.
    n_rows, n = vt.shape
    for r in prange(n_rows):
        fp = np.empty(n + 5, vt.dtype)
        fm = np.empty(n + 5, vt.dtype)
        fhat = np.empty(n, vt.dtype)
        for idx in range(-2, n + 3):
            pos = idx % n
            vv = vt[r, pos]
            g = u_perp[pos] * vv
            av = alpha * vv
            fp[idx + 2] = 0.5 * (g + av)
            fm[idx + 2] = 0.5 * (g - av)
        for i in range(n):
            plus = _upwind_face(fp[i], fp[i + 1], fp[i + 2], fp[i + 3], fp[i + 4])
            minus = _upwind_face(fm[i + 5], fm[i + 4], fm[i + 3], fm[i + 2], fm[i + 1])
            fhat[i] = plus + minus
        out[r, 0] = (fhat[0] - fhat[n - 1]) * inv_dx
        for i in range(1, n):
            out[r, i] = (fhat[i] - fhat[i - 1]) * inv_dx


@njit(cache=True)
def _max_theta_speed(v, u_par, b_coef):
    n_rows, n = v.shape
    m = 0.0
    for r in range(n_rows):
        c = TWO_PI * u_par[r]
        for i in range(n):
            s = abs(c + b_coef * v[r, i])
            if s > m:
                m = s
    return m


def weno5_b(v: np.ndarray, u_par: np.ndarray, u_perp: np.ndarray,
            du_perp_drho: np.ndarray, b_coef: float, d_rho: float,
            d_theta: float) -> np.ndarray:
    """Right-hand side b(sigma, V) on a (n_rho, n_theta) grid.

    ``u_par``, ``u_perp`` and ``du_perp_drho`` are the velocity columns at
    the current sigma, one value per rho node.
    """
    alpha_theta = _max_theta_speed(v, u_par, b_coef)
    alpha_rho = float(np.max(np.abs(u_perp))) if len(u_perp) else 0.0

    div_theta = np.empty_like(v)
    _theta_divergence(v, u_par, b_coef, alpha_theta, 1.0 / d_theta, div_theta)

    vt = np.ascontiguousarray(v.T)
    div_rho_t = np.empty_like(vt)
    _rho_divergence(vt, u_perp, alpha_rho, 1.0 / d_rho, div_rho_t)

    return du_perp_drho[:, None] * v - div_theta - div_rho_t.T
