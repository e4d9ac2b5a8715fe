import numpy as np
import pytest
from scipy.stats import mannwhitneyu

from src.app.schemas.model import ModelSpec, Variant
from src.dist.mixture import load_mixture
from src.samplers.blocks import build_blocks, build_context
from src.volatility.prior import simulate_prior_dsp, simulate_prior_state


def _exact_spec(variant=Variant.ASV_HS, **kw):
    return ModelSpec(variant=variant, k=1, n_burn=0, n_draw=1, mu_update="exact", phi_likelihood="exact", **kw)


def test_prior_dsp_shapes_and_validity():
    dsp = simulate_prior_dsp(50, _exact_spec(Variant.ASV_DHS), np.random.default_rng(0))
    assert dsp.v.shape == (50,)
    assert dsp.problems() == []
    assert -1.0 < dsp.phi < 1.0


def test_prior_dsp_hs_has_no_persistence():
    dsp = simulate_prior_dsp(30, _exact_spec(Variant.ASV_HS), np.random.default_rng(1))
    assert dsp.phi == 0.0


@pytest.mark.parametrize("variant", [Variant.ASV_HS, Variant.ASV_DHS_N])
def test_prior_state_is_consistent(variant):
    mixture = load_mixture()
    state, y_star = simulate_prior_state(25, _exact_spec(variant), mixture, np.random.default_rng(2))
    assert y_star.shape == (25,)
    assert state.is_valid()
    assert state.s.min() >= 1
    if variant.has_nugget:
        assert state.h_star is not None
        assert state.sigma2_c > 0


def test_prior_state_rejects_baselines():
    with pytest.raises(ValueError):
        simulate_prior_state(25, _exact_spec(Variant.RWSV), load_mixture(), np.random.default_rng(0))


@pytest.mark.slow
def test_one_sweep_preserves_the_joint_prior():
    """Getting-it-right: forward draws and forward-then-one-sweep draws share their marginals."""
    mixture = load_mixture()
    spec = _exact_spec(Variant.ASV_HS)
    blocks = build_blocks(spec)
    rng = np.random.default_rng(20240101)

    before, after = [], []
    for _ in range(500):
        state, y_star = simulate_prior_state(20, spec, mixture, rng)
        before.append((state.mu, state.v.mean(), state.h.mean()))
        ctx = build_context(spec, np.zeros(20), y_star, mixture)
        blocks.run_sweep(state, ctx, rng)
        after.append((state.mu, state.v.mean(), state.h.mean()))

    before, after = np.asarray(before), np.asarray(after)
    for i, name in enumerate(("mu", "mean v", "mean h")):
        p = mannwhitneyu(before[:, i], after[:, i]).pvalue
        assert p > 0.01, f"{name}: p={p:.4f}"
