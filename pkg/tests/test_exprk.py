import mpmath as mp
import numpy as np
import pytest

from nwave.exprk import (EPS_DOUBLE, EPS_SINGLE, SpectralTransforms,
                         build_multipliers, exp_euler_step, exprk22_step,
                         phi1, phi2, run_exprk22)
from nwave.grid import DomainConfig, build_axes
from nwave.turbulence import zero_fields

mp.mp.dps = 50


def _phi_oracle(z, order):
    # 50-term extended-precision series for moderate |z|
    zc = mp.mpc(z)
    return complex(mp.fsum(zc**k / mp.factorial(k + order) for k in range(50)))


def _phi_exact(z, order):
    zc = mp.mpc(z)
    if zc == 0:
        return 1.0 if order == 1 else 0.5
    if order == 1:
        return complex((mp.exp(zc) - 1) / zc)
    return complex((mp.exp(zc) - 1 - zc) / zc**2)


def test_phi_series_limits():
    assert phi1(0.0) == 1.0
    assert phi2(0.0) == 0.5


def test_phi_examples_vs_series_oracle():
    assert abs(phi1(1.0) - _phi_oracle(1.0, 1)) <= 1e-14
    assert phi1(1.0) == pytest.approx(np.e - 1, rel=1e-13)
    assert abs(phi2(-2.0) - _phi_oracle(-2.0, 2)) <= 1e-14
    assert phi2(-2.0) == pytest.approx((np.exp(-2) + 1) / 4, rel=1e-13)


def test_phi_accuracy_scan():
    mags = [1e-8, 1e-5, 1e-4, 1e-3, 0.05, 0.4999, 0.5001, 1.0, 3.0, 20.0]
    angles = [0.0, 0.5, np.pi / 2, 2.2, np.pi]
    for m in mags:
        for a in angles:
            z = m * np.exp(1j * a)
            for order, fn in ((1, phi1), (2, phi2)):
                oracle = _phi_exact(z, order)
                assert abs(complex(fn(z)) - oracle) <= 1e-13 * abs(oracle)


def test_phi_huge_negative_argument():
    # linear-flow tables reach z ~ -1e18 at the regularized k = 0 row
    z = -1e18
    assert phi1(z) == pytest.approx(-1.0 / z, rel=1e-13)
    assert phi2(z) == pytest.approx(-1.0 / z, rel=1e-6)
    assert np.isfinite(phi2(-1e18 + 5j))


def test_multiplier_table_origin_and_stability():
    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=120)
    m = build_multipliers(cfg, EPS_DOUBLE)
    assert m.z[0, 0] == 0
    assert m.E[0, 0] == 1.0 and m.Phi1[0, 0] == 1.0 and m.Phi2[0, 0] == 0.5
    assert np.max(m.z.real) <= 0.0
    assert np.max(np.abs(m.E)) <= 1.0 + 1e-15
    for A in (0.0, 7e-6, 3.4e-4):
        mm = build_multipliers(DomainConfig(N_rho=32, N_theta=28, A=A))
        assert np.max(np.abs(mm.E)) <= 1.0 + 1e-15


def test_multiplier_zero_rho_mode_equals_absorption_multiplier():
    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=120)
    m = build_multipliers(cfg, EPS_DOUBLE)
    omega = 2 * np.pi * np.arange(cfg.N_theta // 2 + 1) / cfg.theta_span
    absorb = np.exp(-cfg.A * omega**2 * cfg.d_sigma)
    assert np.max(np.abs(m.E[0, :] - absorb)) <= 1e-15


def test_multiplier_zero_theta_mode_fully_damped():
    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=120)
    m = build_multipliers(cfg, EPS_DOUBLE)
    # the eps-regularized denominator sends Re z to huge negative values
    assert np.max(np.abs(m.E[1:, 0])) <= 1e-300
    assert np.all(m.z.real[1:, 0] < -1e10)


def test_phi_recurrences_on_table():
    cfg = DomainConfig(N_rho=48, N_theta=42, N_sigma=77)
    m = build_multipliers(cfg, EPS_DOUBLE)
    z = m.z.ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        ez = np.exp(z)
    r1 = np.abs(z * phi2(z) - (phi1(z) - 1.0))
    r2 = np.abs(z * phi1(z) - (ez - 1.0))
    assert np.max(r1) <= 1e-12
    assert np.max(r2 / np.maximum(1.0, np.abs(ez - 1.0))) <= 1e-12


def test_single_precision_epsilon():
    cfg = DomainConfig(N_rho=16, N_theta=14)
    m = build_multipliers(cfg, EPS_SINGLE, dtype=np.complex64)
    assert m.eps == 2.0 ** -24
    assert m.E.dtype == np.complex64


def _single_mode(cfg, j0, k0):
    _, rho, theta = build_axes(cfg)
    xi = 2 * np.pi * j0 / cfg.rho_span
    om = 2 * np.pi * k0 / cfg.theta_span
    phase = (xi * (rho[:, None] - cfg.rho_min)
             + om * (theta[None, :] - cfg.theta_min))
    return np.cos(phase), xi, om, phase


def test_one_step_matches_analytic_multiplier():
    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=100, A=3.4e-4, B=0.0)
    v0, xi, om, phase = _single_mode(cfg, 3, 5)
    m = build_multipliers(cfg, EPS_DOUBLE)
    tr = SpectralTransforms(cfg.N_rho, cfg.N_theta)
    vhat, _ = exprk22_step(tr.forward(v0), m, lambda s, v: np.zeros_like(v),
                           cfg.d_sigma, tr)
    got = tr.inverse(vhat)
    z = cfg.d_sigma * (-(xi**2) / (4 * np.pi * (1j * om + EPS_DOUBLE / (4 * np.pi)))
                       - cfg.A * om**2)
    exact = np.real(np.exp(z) * np.exp(1j * phase))
    assert np.max(np.abs(got - exact)) <= 1e-12 * np.max(np.abs(exact))
    assert abs(abs(np.exp(z)) - np.exp(-cfg.A * om**2 * cfg.d_sigma)) <= 1e-15


def test_pure_linear_flow_is_multiplier_application(rng):
    cfg = DomainConfig(N_rho=32, N_theta=28, N_sigma=50)
    m = build_multipliers(cfg, EPS_DOUBLE)
    tr = SpectralTransforms(cfg.N_rho, cfg.N_theta)
    vhat0 = tr.forward(rng.standard_normal((32, 28)))
    vhat1, _ = exprk22_step(vhat0, m, lambda s, v: np.zeros_like(v),
                            cfg.d_sigma, tr)
    assert np.array_equal(vhat1, m.E * vhat0)


def test_euler_equals_exprk22_stage_one(rng):
    cfg = DomainConfig(N_rho=32, N_theta=28, N_sigma=50)
    m = build_multipliers(cfg, EPS_DOUBLE)

    def b_eval(stage, v):
        return 0.01 * v * v  # any nonlinearity, frozen across stages

    tr1 = SpectralTransforms(cfg.N_rho, cfg.N_theta)
    tr2 = SpectralTransforms(cfg.N_rho, cfg.N_theta)
    vhat0 = tr1.forward(rng.standard_normal((32, 28)))
    stage, _ = exp_euler_step(vhat0.copy(), m, b_eval, cfg.d_sigma, tr2)
    full, _ = exprk22_step(vhat0.copy(), m,
                           lambda s, v: b_eval(0, v) if s == 0 else np.zeros_like(v),
                           cfg.d_sigma, tr1)
    # stage value of ExpRK22 equals the Euler update bitwise
    expected_stage = m.E * vhat0 + cfg.d_sigma * m.Phi1 * tr2.forward(
        b_eval(0, tr2.inverse(vhat0)))
    assert np.array_equal(stage, expected_stage)


def test_transform_counts_per_step():
    cfg = DomainConfig(N_rho=32, N_theta=28, N_sigma=6, Sigma=1.2)
    _, rho, theta = build_axes(cfg)
    v0 = np.cos(2 * np.pi * (theta[None, :] - cfg.theta_min) / cfg.theta_span
                ) * np.ones((32, 1))
    fields = zero_fields(cfg.N_sigma + 1, cfg.N_rho + 1)
    from nwave.grid import Field2D

    rep22 = run_exprk22(cfg, Field2D(v0), fields, scheme="exprk22")
    assert rep22.transforms == 4 * cfg.N_sigma
    rep1 = run_exprk22(cfg, Field2D(v0), fields, scheme="expeuler")
    assert rep1.transforms == 2 * cfg.N_sigma


def test_zero_initial_field_stays_zero():
    cfg = DomainConfig(N_rho=32, N_theta=28, N_sigma=5, Sigma=1.0)
    from nwave.grid import Field2D

    rep = run_exprk22(cfg, Field2D(np.zeros((32, 28))),
                      zero_fields(6, 33))
    assert rep.max_abs_v == 0.0
    assert np.all(rep.final.values == 0.0)


def test_single_precision_run_tracks_double():
    from nwave.analysis import initial_nwave

    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=10, Sigma=4.0)
    _, rho, theta = build_axes(cfg)
    v0 = initial_nwave(rho, theta, cfg.A, cfg.B)
    fields = zero_fields(11, 65)
    rd = run_exprk22(cfg, v0, fields)
    rs = run_exprk22(cfg, v0, fields, precision="single")
    assert rs.precision == "single"
    rel = (np.max(np.abs(rs.final.values - rd.final.values))
           / np.max(np.abs(rd.final.values)))
    assert 0 < rel < 1e-4  # f32 roundoff, far above f64 agreement


def test_wall_time_covers_measured_buckets():
    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=10, Sigma=4.0)
    from nwave.grid import Field2D

    rep = run_exprk22(cfg, Field2D(np.zeros((64, 56))), zero_fields(11, 65))
    assert rep.wall_seconds >= rep.nonlinear_seconds + rep.linear_seconds
    assert np.all(rep.step_seconds >= rep.step_nonlinear + rep.step_linear)


def test_run_deterministic_bitwise():
    from nwave.analysis import initial_nwave
    from nwave.grid import Field2D
    from nwave.turbulence import TurbulenceParams, evaluate_fields, sample_modes

    cfg = DomainConfig(N_rho=64, N_theta=56, N_sigma=8, Sigma=3.2)
    _, rho, theta = build_axes(cfg)
    spec = sample_modes(TurbulenceParams(seed=1))
    sig = np.arange(cfg.N_sigma + 1) * cfg.d_sigma
    fields = evaluate_fields(spec, spec.lam, sig, rho)
    v0 = initial_nwave(rho, theta, cfg.A, cfg.B)
    rep_a = run_exprk22(cfg, v0, fields)
    rep_b = run_exprk22(cfg, v0, fields)
    assert np.array_equal(rep_a.final.values, rep_b.final.values)
