import numpy as np

from nwave.weno import weno5_b


def _orders(errs):
    return [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]


def test_constant_field_is_equilibrium():
    # flux divergence in rho cancels the source dU_perp/drho * V; theta
    # flux is theta-constant.  Smooth single-mode U_perp on a fine grid
    # reaches the roundoff floor.
    n = 2048
    d_rho = 1.0 / n
    rho = np.arange(n) * d_rho
    u_perp = 0.05 * np.sin(2 * np.pi * rho)
    du = 0.05 * 2 * np.pi * np.cos(2 * np.pi * rho)
    u_par = np.full(n, 0.02)
    v = np.full((n, 16), 2.0)
    b = weno5_b(v, u_par, u_perp, du, 0.05, d_rho, 2 * np.pi / 16)
    assert np.max(np.abs(b)) <= 1e-12 * np.max(np.abs(du * v[0, 0]))


def test_zero_velocity_constant_field_exact_zero():
    v = np.full((8, 8), 3.0)
    zero = np.zeros(8)
    b = weno5_b(v, zero, zero, zero, 0.05, 0.1, 0.1)
    assert np.max(np.abs(b)) == 0.0


def test_theta_flux_order_on_sine_mode():
    # U = 0, V = sin(theta): b = +(B/2) d(V^2)/dtheta = (B/2) sin(2 theta)
    B = 0.05
    span = 2 * np.pi
    errs = []
    for n in (64, 128, 256):
        d = span / n
        th = np.arange(n) * d
        v = np.tile(np.sin(th), (32, 1))
        zeros = np.zeros(32)
        b = weno5_b(v, zeros, zeros, zeros, B, 1.0 / 32, d)
        exact = (B / 2) * np.sin(2 * th)
        errs.append(np.sqrt(np.mean((b - exact[None, :]) ** 2)))
    orders = _orders(errs)
    fit = np.polyfit(np.log([64, 128, 256]), np.log(errs), 1)[0]
    assert min(orders) >= 4.5
    assert -fit >= 4.5


def test_rho_flux_order_on_sine_mode():
    # B = 0, U_par = 0, U_perp = const: b = -U_perp dV/drho
    c = 0.03
    errs = []
    for n in (64, 128, 256):
        d = 1.0 / n
        rho = np.arange(n) * d
        v = np.tile(np.sin(2 * np.pi * rho)[:, None], (1, 32))
        b = weno5_b(v, np.zeros(n), np.full(n, c), np.zeros(n), 0.0, d,
                    2 * np.pi / 32)
        exact = -c * 2 * np.pi * np.cos(2 * np.pi * rho)
        errs.append(np.sqrt(np.mean((b - exact[:, None]) ** 2)))
    assert min(_orders(errs)) >= 4.5


def test_signs_match_the_evolution_form(rng):
    # b = 2 pi U_par dV/dtheta - U_perp dV/drho + (B/2) d(V^2)/dtheta on
    # smooth data, against spectral derivatives of the exact terms
    n_rho, n_theta = 128, 128
    rho_span, theta_span = 1.0, 2 * np.pi
    d_rho, d_theta = rho_span / n_rho, theta_span / n_theta
    rho = np.arange(n_rho) * d_rho
    th = np.arange(n_theta) * d_theta
    B = 0.05
    u_par = np.full(n_rho, 0.04)
    u_perp = np.full(n_rho, -0.03)
    v = np.sin(2 * np.pi * rho)[:, None] * np.cos(th)[None, :] * 0.5
    dv_dth = -0.5 * np.sin(2 * np.pi * rho)[:, None] * np.sin(th)[None, :]
    dv_drho = np.pi * np.cos(2 * np.pi * rho)[:, None] * np.cos(th)[None, :]
    dv2_dth = 2 * v * dv_dth
    exact = (2 * np.pi * u_par[:, None] * dv_dth
             - u_perp[:, None] * dv_drho + 0.5 * B * dv2_dth)
    b = weno5_b(v, u_par, u_perp, np.zeros(n_rho), B, d_rho, d_theta)
    assert np.max(np.abs(b - exact)) <= 2e-5 * np.max(np.abs(exact))
