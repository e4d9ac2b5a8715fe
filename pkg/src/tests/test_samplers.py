import numpy as np
import pytest
from scipy import stats

from src.app.schemas.model import ModelSpec, Variant
from src.dist.mixture import load_mixture
from src.dist.zdist import ZDistParams, sample_z
from src.linalg.banded import solve
from src.samplers import observation
from src.samplers.baseline import (
    INITIAL_LEVEL_VAR,
    LASSO_PRIOR,
    rw_log_variances,
    sample_lasso_increments,
    update_lasso,
    update_rwsv_variance,
)
from src.samplers.blocks import GibbsBlocks, build_blocks, build_context
from src.samplers.evolution import (
    DSPOptions,
    dsp_sweep,
    innovations,
    mu_posterior_displayed,
    mu_posterior_exact,
    omega_star,
    phi_loglik_displayed,
    phi_loglik_exact,
    update_mu,
    update_phi,
    update_xi,
    v_posterior,
)
from src.samplers.observation import h_posterior, h_star_collapsed_posterior, h_star_posterior
from src.samplers.trend import beta_posterior
from src.volatility.difference import diff_matrix
from src.volatility.errors import DivergenceError
from src.volatility.runner import initialize_state
from src.volatility.state import DSPState

T = 8


@pytest.fixture()
def mixture():
    return load_mixture()


@pytest.fixture()
def rng():
    return np.random.default_rng(7)


def _dense_Qv(v, k):
    D = diff_matrix(v.size, k).D_full.toarray()
    return D.T @ np.diag(np.exp(-v)) @ D


def _assert_matches(Q, linear, dense_Q, dense_linear):
    assert np.allclose(Q.to_dense(), dense_Q, atol=1e-8)
    assert np.allclose(linear, dense_linear, atol=1e-8)
    assert np.allclose(solve(Q, linear), np.linalg.solve(dense_Q, dense_linear), atol=1e-8)


# -----------------------
# Gaussian blocks against dense oracles
# -----------------------
@pytest.mark.parametrize("k", [1, 2])
def test_h_block_matches_dense_oracle(mixture, rng, k):
    v, y_star = rng.normal(size=T), rng.normal(-1.0, 2.0, size=T)
    j = rng.integers(1, 11, size=T)
    Q, linear = h_posterior(v, j, y_star, mixture, k)

    m, w2 = mixture.m[j - 1], mixture.w2[j - 1]
    _assert_matches(Q, linear, _dense_Qv(v, k) + np.diag(1.0 / w2), (y_star - m) / w2)


def test_h_star_blocks_match_dense_oracle(mixture, rng):
    v, y_star, h = rng.normal(size=T), rng.normal(size=T), rng.normal(size=T)
    j = rng.integers(1, 11, size=T)
    sigma2_c = 0.3

    Q, linear = h_star_collapsed_posterior(v, j, y_star, sigma2_c, mixture, 1)
    total = sigma2_c + mixture.w2[j - 1]
    _assert_matches(Q, linear, _dense_Qv(v, 1) + np.diag(1.0 / total), (y_star - mixture.m[j - 1]) / total)

    Q, linear = h_star_posterior(v, h, sigma2_c, 2)
    _assert_matches(Q, linear, _dense_Qv(v, 2) + np.eye(T) / sigma2_c, h / sigma2_c)


@pytest.mark.parametrize("shift", [0.0, 0.25])
def test_v_block_matches_dense_oracle(mixture, rng, shift):
    omega, xi = rng.normal(-2.0, 1.0, size=T), rng.gamma(2.0, 0.5, size=T)
    s = rng.integers(1, 11, size=T)
    mu, phi = -1.5, 0.6
    Q, linear = v_posterior(s, omega, xi, mu, phi, mixture, shift)

    A = np.eye(T) - phi * np.eye(T, k=-1)
    Qxi = A.T @ np.diag(xi) @ A
    m, w2 = mixture.m[s - 1], mixture.w2[s - 1]
    dense_linear = (omega - m) / w2 + Qxi @ np.full(T, mu) + A.T @ np.full(T, shift)
    _assert_matches(Q, linear, Qxi + np.diag(1.0 / w2), dense_linear)


def test_beta_block_matches_dense_oracle(rng):
    y, h, v_beta = rng.normal(size=T), rng.normal(size=T), rng.normal(size=T)
    Q, linear = beta_posterior(y, h, v_beta, 2)
    _assert_matches(Q, linear, _dense_Qv(v_beta, 2) + np.diag(np.exp(-h)), y * np.exp(-h))


# -----------------------
# mu, phi
# -----------------------
def test_mu_exact_matches_innovation_likelihood(rng):
    v, xi = rng.normal(size=T), rng.gamma(2.0, size=T)
    phi, xi_mu, shift = 0.4, 0.8, 0.25
    mean, prec = mu_posterior_exact(v, xi, phi, xi_mu, shift)

    def log_post(mu):
        eta = innovations(v, mu, phi)
        return float(np.sum(-0.5 * xi * eta ** 2 + shift * eta) - 0.5 * xi_mu * mu ** 2)

    # a Gaussian log density is quadratic: recover its curvature and mode by finite differences
    h = 0.5
    curvature = -(log_post(h) - 2 * log_post(0.0) + log_post(-h)) / h ** 2
    slope = (log_post(h) - log_post(-h)) / (2 * h)
    assert prec == pytest.approx(curvature, rel=1e-8)
    assert mean == pytest.approx(slope / curvature, rel=1e-8)


def test_mu_displayed_pseudo_observation(rng):
    v, xi = rng.normal(size=T), rng.gamma(2.0, size=T)
    phi, xi_mu = 0.3, 1.0
    mean, prec = mu_posterior_displayed(v, xi, phi, xi_mu)

    root = np.sqrt(xi[1:])
    scale = (1 - phi) * root.sum()
    v_hat = sum(root[i] * (v[i + 1] - phi * v[i]) for i in range(T - 1)) / scale
    var = (T - 1) / scale ** 2
    assert prec == pytest.approx(1 / var + xi_mu)
    assert mean == pytest.approx(v_hat / var / prec)


def test_phi_exact_differences_match_innovations(rng):
    v, xi = rng.normal(size=T), rng.gamma(2.0, size=T)
    mu, shift = 0.2, 0.25
    loglik = phi_loglik_exact(v, xi, mu, shift)

    def oracle(phi):
        eta = innovations(v, mu, phi)[1:]
        return float(np.sum(-0.5 * xi[1:] * eta ** 2 + shift * eta))

    assert loglik(0.3) - loglik(0.7) == pytest.approx(oracle(0.3) - oracle(0.7), rel=1e-10)


def test_phi_displayed_drops_degenerate_terms():
    v = np.array([0.0, 1.0, 0.5, 2.0, 1.0])
    xi = np.ones(5)
    loglik = phi_loglik_displayed(v, xi, mu=0.0)
    assert np.isfinite(loglik(0.5))

    flat = phi_loglik_displayed(np.zeros(5), xi, mu=0.0)
    assert flat(0.1) == flat(0.9) == 0.0


def test_mu_default_rule_is_the_exact_conditional(rng):
    v, xi = rng.normal(size=T), rng.gamma(0.5, size=T)
    phi, xi_mu = 0.5, 1.0
    default = update_mu(v, xi, phi, xi_mu, np.random.default_rng(3))
    assert default == update_mu(v, xi, phi, xi_mu, np.random.default_rng(3), rule="exact")
    assert DSPOptions().mu_update == DSPOptions().phi_likelihood == "exact"

    # sqrt(xi) weighting never gains precision over the full xi-weighted conditional
    _, exact_prec = mu_posterior_exact(v, xi, phi, xi_mu)
    _, displayed_prec = mu_posterior_displayed(v, xi, phi, xi_mu)
    assert exact_prec > displayed_prec


def test_phi_recovered_from_simulated_dsp_path(rng):
    n, phi_true = 2000, 0.7
    eta = sample_z(ZDistParams(), n, rng)
    v = np.empty(n)
    v[0] = eta[0]
    for t in range(1, n):
        v[t] = phi_true * v[t - 1] + eta[t]

    opts = DSPOptions()
    phi, kept = 0.5, []
    for it in range(400):
        xi = update_xi(v, 0.0, phi, rng)
        phi = update_phi(v, xi, 0.0, phi, opts, rng)
        if it >= 100:
            kept.append(phi)
    assert np.mean(kept) == pytest.approx(phi_true, abs=0.08)


def test_omega_star_levels_then_differences():
    path = np.array([2.0, 3.0, 5.0])
    out = omega_star(path, 1, 0.0)
    assert np.allclose(out, np.log([4.0, 1.0, 4.0]))


def test_dsp_sweep_keeps_state_valid(mixture, rng):
    dsp = DSPState.initial(30, mu=-2.0, phi=0.5)
    omega = omega_star(np.cumsum(rng.normal(size=30)), 1, 1e-8)
    opts = DSPOptions(mu_update="exact", phi_likelihood="exact")
    for _ in range(20):
        dsp_sweep(dsp, omega, opts, mixture, rng)
    assert dsp.problems() == []
    assert -1.0 < dsp.phi < 1.0


def test_vanishing_evolution_variance_flattens_h(mixture, rng):
    n = 50
    y_star = rng.normal(1.0, 2.0, n)
    j = np.full(n, 5)
    v = np.full(n, -30.0)
    v[0] = np.log(100.0)
    flat = observation.update_h(v, j, y_star, mixture, 1, rng)
    assert np.ptp(flat) < 1e-3

    rough = observation.update_h(np.zeros(n), j, y_star, mixture, 1, rng)
    assert np.ptp(rough) > 1.0


def test_nugget_variance_concentrates_on_residual_scale(rng):
    n = 2000
    h = rng.normal(0.0, np.sqrt(0.5), n)
    draws = [observation.update_nugget(h, np.zeros(n), np.zeros(n), 1, rng)[1] for _ in range(500)]
    assert np.mean(draws) == pytest.approx(0.5, abs=0.05)


def test_nugget_residual_spread_tracks_sigma2_c(mixture, rng):
    # data drawn from the model itself, so posterior draws of h - h* share the prior spread
    n = 2000
    v = np.full(n, np.log(0.01))
    v[0] = 0.0
    grid = np.array([0.05, 0.1, 0.2, 0.4, 0.8])
    spread = []
    for sigma2_c in grid:
        h_star = np.cumsum(np.exp(0.5 * v) * rng.standard_normal(n))
        h = h_star + np.sqrt(sigma2_c) * rng.standard_normal(n)
        j, noise = mixture.rvs(n, rng)
        draw_star, draw_h = observation.update_h_nugget(v, j, h + noise, sigma2_c, mixture, 1, rng)
        spread.append(np.var(draw_h - draw_star))
    assert np.polyfit(grid, spread, 1)[0] == pytest.approx(1.0, abs=0.1)


# -----------------------
# Random-walk baselines
# -----------------------
def test_rw_log_variances_diffuse_first_level():
    v = rw_log_variances(0.5, 4)
    assert v[0] == pytest.approx(np.log(INITIAL_LEVEL_VAR))
    assert np.allclose(v[1:], np.log(0.5))


def test_rwsv_variance_posterior_mean(rng):
    h = np.cumsum(rng.normal(0.0, 0.5, size=400))
    draws = np.array([update_rwsv_variance(h, rng) for _ in range(4000)])
    ss = np.sum(np.diff(h) ** 2)
    shape, rate = 0.01 + 399 / 2, 0.01 + ss / 2
    assert draws.mean() == pytest.approx(rate / (shape - 1), rel=0.02)


def test_lasso_update_shapes(rng):
    h = np.cumsum(rng.normal(size=50))
    h[10] = h[9]
    sigma2, lambda2 = update_lasso(h, 1.0, rng)
    assert sigma2.shape == (49,)
    assert np.all(sigma2 > 0)
    assert lambda2 > 0
    assert sample_lasso_increments(2.0, 100, rng).shape == (100,)


def test_lasso_increments_are_laplace(rng):
    dh = sample_lasso_increments(2.0, 400_000, rng)
    # Laplace with variance 2 / lambda2
    assert dh.var() == pytest.approx(1.0, abs=0.02)
    assert stats.kurtosis(dh, fisher=False) == pytest.approx(6.0, abs=0.4)


def test_lasso_conjugate_moments(rng):
    h = np.cumsum(np.tile([0.5, -0.5], 25))
    precisions, scaled = [], []
    for _ in range(4000):
        sigma2, lambda2 = update_lasso(h, 1.0, rng)
        precisions.append(1.0 / sigma2)
        scaled.append(lambda2 * (LASSO_PRIOR[1] + 0.5 * sigma2.sum()))
    # 1 / sigma2_t is inverse Gaussian with mean sqrt(lambda2 / dh_t^2)
    assert np.mean(precisions) == pytest.approx(2.0, rel=0.02)
    # lambda2 times its rate is Gamma(r + T - 1, 1)
    assert np.mean(scaled) == pytest.approx(LASSO_PRIOR[0] + 49, rel=0.02)


# -----------------------
# Sweep composition
# -----------------------
@pytest.mark.parametrize(
    "variant, expected",
    [
        (Variant.ASV_HS, ["j", "h", "s", "v", "xi", "mu", "xi_mu"]),
        (Variant.ASV_DHS, ["j", "h", "s", "v", "xi", "mu", "xi_mu", "phi"]),
        (Variant.ASV_DHS_N, ["j", "h", "nugget", "s", "v", "xi", "mu", "xi_mu", "phi"]),
        (Variant.RWSV, ["j", "h", "sigma2_h"]),
        (Variant.RWSV_BL, ["j", "h", "lasso"]),
        (
            Variant.BTF_ASV,
            ["beta", "s_beta", "v_beta", "xi_beta", "mu_beta", "xi_mu_beta", "phi_beta",
             "j", "h", "s", "v", "xi", "mu", "xi_mu", "phi"],
        ),
    ],
)
def test_sweep_order(variant, expected):
    assert build_blocks(ModelSpec(variant=variant)).order == expected


def _fixture_state(mixture, variant=Variant.ASV_DHS):
    spec = ModelSpec(variant=variant, n_burn=1, n_draw=1)
    y = np.random.default_rng(0).normal(size=40)
    state, y_star = initialize_state(y, spec)
    return spec, state, build_context(spec, y, y_star, mixture)


def test_kernel_failure_becomes_divergence(mixture, rng):
    spec, state, ctx = _fixture_state(mixture)

    def boom(state, ctx, rng):
        raise FloatingPointError("overflow")

    blocks = GibbsBlocks(variant=spec.variant, steps=[("boom", boom)])
    with pytest.raises(DivergenceError) as exc:
        blocks.run_sweep(state, ctx, rng, iteration=12, run_id="run_test")
    assert exc.value.block == "boom"
    assert exc.value.iteration == 12
    assert exc.value.run_id == "run_test"
    assert "FloatingPointError" in exc.value.detail


def test_invalid_block_becomes_divergence(mixture, rng):
    spec, state, ctx = _fixture_state(mixture)

    def poison(state, ctx, rng):
        state.h = np.full(state.T, np.nan)

    blocks = GibbsBlocks(variant=spec.variant, steps=[("h", poison)])
    with pytest.raises(DivergenceError) as exc:
        blocks.run_sweep(state, ctx, rng)
    assert exc.value.block == "h"
    assert "invalid h" in str(exc.value)


def test_btf_sweep_refreshes_transformed_data(mixture, rng):
    spec, state, ctx = _fixture_state(mixture, Variant.BTF_ASV)
    before = ctx.y_star.copy()
    build_blocks(spec).run_sweep(state, ctx, rng)
    assert not np.array_equal(before, ctx.y_star)
    assert np.allclose(ctx.y_star, observation.log_square(ctx.y - state.beta, spec.offset_c))
    assert state.is_valid()
