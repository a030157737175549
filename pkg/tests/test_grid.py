import numpy as np
import pytest

from nwave.errors import ConfigError
from nwave.grid import (DomainConfig, Field2D, build_axes, extract_region,
                        l2_norm, relative_error, rho_nodes_closed,
                        to_physical, to_spectral)


def test_defaults_are_the_set1_production_grid():
    cfg = DomainConfig()
    assert cfg.N_sigma == 300 and cfg.N_rho == 1250 and cfg.N_theta == 7 * 64
    assert cfg.Sigma == 120.0 and cfg.rho_max == 400.0
    assert np.isclose(cfg.theta_span, 28 * np.pi)
    assert cfg.A == 3.4e-4 and cfg.B == 0.05


def test_axes_spacing_and_endpoints():
    cfg = DomainConfig(N_sigma=300)
    sigma, rho, theta = build_axes(cfg)
    assert cfg.d_sigma == 0.4
    assert sigma[1] == 0.4
    assert len(sigma) == 301 and sigma[-1] == pytest.approx(120.0)


def test_axes_single_interval_endpoint_case():
    cfg = DomainConfig(N_sigma=1)
    sigma, _, _ = build_axes(cfg)
    assert list(sigma) == [0.0, 120.0]


def test_rho_axis_periodic_excludes_endpoint():
    cfg = DomainConfig(rho_min=0.0, rho_max=400.0, N_rho=4)
    _, rho, _ = build_axes(cfg)
    assert list(rho) == [0.0, 100.0, 200.0, 300.0]
    assert list(rho_nodes_closed(cfg)) == [0.0, 100.0, 200.0, 300.0, 400.0]


@pytest.mark.parametrize("kwargs", [
    dict(Sigma=0.0),
    dict(Sigma=-1.0),
    dict(rho_min=1.0, rho_max=1.0),
    dict(theta_min=2.0, theta_max=1.0),
    dict(N_sigma=0),
    dict(N_rho=-3),
    dict(A=-1e-6),
    dict(roi_rho=(500.0, 600.0)),
    dict(roi_theta=(-100.0, 0.0)),
])
def test_invalid_config_rejected(kwargs):
    with pytest.raises(ConfigError):
        DomainConfig(**kwargs)


def test_l2_norm_zero_and_constant():
    assert l2_norm(Field2D(np.zeros((3, 4))), 0.5, 0.5) == 0.0
    # constant 1 on 2x2 with unit spacings: sqrt(1*1*4) = 2
    assert l2_norm(Field2D(np.ones((2, 2))), 1.0, 1.0) == pytest.approx(2.0)


def test_l2_norm_against_double_loop_oracle(rng):
    v = rng.standard_normal((7, 11))
    d_rho, d_theta = 0.31, 0.17
    acc = 0.0
    for j in range(7):
        for k in range(11):
            acc += v[j, k] ** 2
    oracle = (d_rho * d_theta * acc) ** 0.5
    got = l2_norm(Field2D(v), d_rho, d_theta)
    assert abs(got - oracle) <= 1e-14 * oracle


def test_l2_norm_scales_linearly(rng):
    for _ in range(10):
        v = rng.standard_normal((5, 6))
        c = float(rng.uniform(-4, 4))
        a = l2_norm(Field2D(c * v), 0.2, 0.3)
        b = abs(c) * l2_norm(Field2D(v), 0.2, 0.3)
        assert a == pytest.approx(b, rel=1e-13)


def test_l2_norm_rejects_nonfinite():
    v = np.ones((2, 2))
    v[0, 0] = np.nan
    with pytest.raises(ValueError):
        l2_norm(Field2D(v), 1.0, 1.0)


def test_relative_error_basics(rng):
    ref = Field2D(rng.standard_normal((6, 8)))
    assert relative_error(ref, ref.copy(), 0.1, 0.2) == 0.0
    assert relative_error(ref, Field2D(2 * ref.values), 0.1, 0.2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        relative_error(Field2D(np.zeros((6, 8))), ref, 0.1, 0.2)


def test_relative_error_orthogonal_perturbation(rng):
    # e orthogonal to ref under the discrete inner product, |e| = 0.1|ref|
    ref = rng.standard_normal((6, 8))
    e = rng.standard_normal((6, 8))
    e -= ref * np.sum(e * ref) / np.sum(ref * ref)
    assert abs(np.sum(e * ref)) < 1e-12 * np.sqrt(np.sum(e**2) * np.sum(ref**2))
    e *= 0.1 * np.sqrt(np.sum(ref * ref) / np.sum(e * e))
    got = relative_error(Field2D(ref), Field2D(ref + e), 0.4, 0.7)
    assert got == pytest.approx(0.1, rel=1e-12)


def test_extract_region_full_domain_identity(rng):
    cfg = DomainConfig()
    _, rho, theta = build_axes(cfg)
    f = Field2D(rng.standard_normal((len(rho), len(theta))))
    sub, sub_rho, sub_theta = extract_region(
        f, rho, theta, (cfg.rho_min, cfg.rho_max), (cfg.theta_min, cfg.theta_max))
    assert np.array_equal(sub.values, f.values)
    assert np.array_equal(sub_rho, rho) and np.array_equal(sub_theta, theta)


def test_extract_region_arithmetic():
    rho = np.array([0.0, 100.0, 200.0, 300.0])
    theta = np.array([0.0, 1.0, 2.0])
    f = Field2D(np.arange(12.0).reshape(4, 3))
    sub, sub_rho, _ = extract_region(f, rho, theta, (100.0, 300.0), (0.0, 2.0))
    assert list(sub_rho) == [100.0, 200.0, 300.0]
    assert np.array_equal(sub.values, f.values[1:4])


def test_extract_region_paper_roi_against_scan_oracle(rng):
    # Set-2 grid, rho-roi [133, 267]
    cfg = DomainConfig(N_rho=2500, N_theta=7 * 128, N_sigma=600)
    _, rho, theta = build_axes(cfg)
    f = Field2D(rng.standard_normal((len(rho), len(theta))))
    sub, sub_rho, sub_theta = extract_region(f, rho, theta, cfg.roi_rho,
                                             cfg.roi_theta)
    rho_scan = [j for j, r in enumerate(rho) if 133.0 <= r <= 267.0]
    theta_scan = [k for k, t in enumerate(theta)
                  if cfg.roi_theta[0] <= t <= cfg.roi_theta[1]]
    assert list(sub_rho) == [rho[j] for j in rho_scan]
    assert list(sub_theta) == [theta[k] for k in theta_scan]
    assert np.array_equal(
        sub.values, f.values[np.ix_(rho_scan, theta_scan)])


def test_extract_region_idempotent(rng):
    cfg = DomainConfig()
    _, rho, theta = build_axes(cfg)
    f = Field2D(rng.standard_normal((len(rho), len(theta))))
    roi_r, roi_t = (133.0, 267.0), (0.0, 15 * np.pi)
    sub1, r1, t1 = extract_region(f, rho, theta, roi_r, roi_t)
    sub2, r2, t2 = extract_region(sub1, r1, t1, roi_r, roi_t)
    assert np.array_equal(sub1.values, sub2.values)
    assert np.array_equal(r1, r2) and np.array_equal(t1, t2)


def test_extract_region_empty_errors():
    rho = np.array([0.0, 100.0, 200.0])
    theta = np.array([0.0, 1.0])
    f = Field2D(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        extract_region(f, rho, theta, (110.0, 190.0), (0.0, 1.0))


def test_spectral_roundtrip_and_conjugate_symmetry(rng):
    f = Field2D(rng.standard_normal((24, 36)))
    spec = to_spectral(f)
    back = to_physical(spec)
    scale = np.max(np.abs(f.values))
    assert np.max(np.abs(back.values - f.values)) <= 1e-12 * scale
    c = spec.coeffs
    n0, n1 = c.shape
    flipped = np.conj(c[(-np.arange(n0)) % n0][:, (-np.arange(n1)) % n1])
    assert np.max(np.abs(c - flipped)) <= 1e-9 * np.max(np.abs(c))
