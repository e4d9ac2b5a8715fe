import numpy as np
import pytest
from scipy.stats import kstest

from src.dsptheory.bounds import (
    K_LOWER,
    K_UPPER,
    UnboundedDensityError,
    marginal_bounds_delta_h,
    marginal_density_delta_h,
)
from src.dsptheory.checks import NORMALIZATION_TOL, density_checks, kappa_interval_mass, run_checks
from src.dsptheory.forward import forward_simulate_dsp
from src.dsptheory.horseshoe import (
    crossing_points,
    crossing_points_numeric,
    horseshoe_density_kappa,
    horseshoe_density_lambda,
)
from src.dsptheory.stationary import (
    DSPStationary,
    NonStationaryError,
    cf_partial_product,
    stationary_cdf_kappa,
    stationary_cdf_lambda,
    stationary_cdf_v,
    stationary_density_kappa,
    stationary_density_lambda,
    stationary_density_v,
    stationary_variance,
)


def test_logistic_density_is_stable_in_the_tails():
    v = np.array([-2000.0, 0.0, 2000.0])
    dens = stationary_density_v(v)
    assert np.all(np.isfinite(dens))
    assert dens[1] == pytest.approx(0.125)
    assert dens[0] == dens[2]


def test_cdfs_agree_across_transformations():
    v = np.array([-3.0, -0.5, 0.0, 1.0, 4.0])
    lam = np.exp(v / 2.0)
    kappa = 1.0 / (1.0 + np.exp(v))
    assert np.allclose(stationary_cdf_lambda(lam), stationary_cdf_v(v))
    # kappa decreases in v
    assert np.allclose(stationary_cdf_kappa(kappa), 1.0 - stationary_cdf_v(v))


def test_stationary_variance_formula():
    assert stationary_variance(0.5) == pytest.approx(4.0 * np.pi ** 2 / 3.0)
    assert DSPStationary(phi=0.0).variance == pytest.approx(np.pi ** 2)
    with pytest.raises(NonStationaryError):
        stationary_variance(1.0)
    with pytest.raises(NonStationaryError):
        DSPStationary(phi=-1.0)


def test_cf_product_matches_logistic_cf():
    t = np.array([-0.4, -0.1, 0.05, 0.3])
    # the logistic law with scale 2 has CF 2 pi t / sinh(2 pi t)
    want = 2 * np.pi * t / np.sinh(2 * np.pi * t)
    assert np.allclose(cf_partial_product(t, 0.5, 60), want, atol=1e-12)
    with pytest.raises(ValueError):
        cf_partial_product(0.5, 0.5, 10)


def test_crossing_points_closed_form_and_root_agree():
    lower, upper = crossing_points()
    assert lower < 1.0 < upper
    assert lower * upper == pytest.approx(1.0)
    assert np.allclose(crossing_points_numeric(), (lower, upper), atol=1e-10)
    assert float(stationary_density_lambda(upper)) == pytest.approx(float(horseshoe_density_lambda(upper)))


@pytest.mark.parametrize("dh", [0.1, 1.0, 3.0])
def test_marginal_density_inside_bounds(dh):
    low, high = marginal_bounds_delta_h(dh)
    assert low < marginal_density_delta_h(dh) < high


def test_bounds_constants_and_zero_increment():
    assert K_UPPER == pytest.approx(4.0 * K_LOWER)
    with pytest.raises(UnboundedDensityError):
        marginal_bounds_delta_h(0.0)
    with pytest.raises(UnboundedDensityError):
        marginal_density_delta_h(0.0)


def test_forward_simulation_matches_stationary_law():
    v = forward_simulate_dsp(DSPStationary(phi=0.5), 200_000, np.random.default_rng(20240101), burn=1000, thin=10)
    assert v.shape == (200_000,)
    assert abs(np.var(v, ddof=1) / stationary_variance(0.5) - 1.0) < 0.02
    assert kstest(v, stationary_cdf_v).pvalue > 0.01


def test_forward_simulation_argument_checks():
    with pytest.raises(ValueError):
        forward_simulate_dsp(DSPStationary(), 0, np.random.default_rng(0))


@pytest.mark.parametrize("group", ["density", "bounds", "stationary"])
def test_check_groups_pass(group):
    results = run_checks(group)
    assert results
    failed = [r.name for r in results if not r.passed]
    assert failed == []


def test_unknown_check_group():
    with pytest.raises(ValueError):
        run_checks("everything")


def test_kappa_masses_are_exact_under_angle_substitution():
    assert kappa_interval_mass(stationary_density_kappa) == pytest.approx(1.0, abs=1e-9)
    assert kappa_interval_mass(horseshoe_density_kappa) == pytest.approx(1.0, abs=1e-9)
    assert kappa_interval_mass(stationary_density_kappa, 0.1) == pytest.approx(float(stationary_cdf_kappa(0.1)), abs=1e-9)
    assert kappa_interval_mass(horseshoe_density_kappa, 0.1) == pytest.approx(2.0 / np.pi * np.arcsin(np.sqrt(0.1)), abs=1e-9)


def test_kappa_normalization_check_passes():
    check = next(r for r in density_checks() if r.name == "normalization f(kappa)")
    assert check.passed
    mass = float(check.detail.split("=")[1])
    assert abs(mass - 1.0) < NORMALIZATION_TOL
