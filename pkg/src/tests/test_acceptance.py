"""
Desk-scale benchmark checks. Each fits many chains; run with `pytest -m slow`.
"""
import numpy as np
import pytest

from src.app.schemas.model import ModelSpec
from src.evaluate.kappa import kappa_flags
from src.evaluate.metrics import VolEstimate, ec, mae
from src.simulate.dgp import SimPath, generate_paths, sv_path_from_regimes
from src.volatility.runner import run_chain

pytestmark = pytest.mark.slow

BUDGET = {"n_burn": 2000, "n_draw": 1000, "seed": 11, "mu_update": "exact", "phi_likelihood": "exact"}


def _score(paths, variant):
    maes, ecs = [], []
    for i, path in enumerate(paths):
        draws = run_chain(path.y, ModelSpec(variant=variant, **BUDGET), chain_id=i, progress=False)
        estimate = VolEstimate.from_draws(draws)
        maes.append(mae(path.sigma_true, estimate))
        ecs.append(ec(path.sigma_true, estimate))
    return float(np.mean(maes)), float(np.mean(ecs))


def test_piecewise_constant_dgp_favours_dynamic_horseshoe():
    paths = generate_paths(8, 300, 20, seed=2024)
    dhs_mae, _ = _score(paths, "ASV_DHS")
    rw_mae, _ = _score(paths, "RWSV")
    assert dhs_mae < 0.8 * rw_mae


def test_regime_switching_dgp():
    paths = generate_paths(2, 300, 20, seed=2024)
    dhs_mae, _ = _score(paths, "ASV_DHS")
    rw_mae, _ = _score(paths, "RWSV")
    assert dhs_mae < 0.5 * rw_mae

    _, nugget_ec = _score(paths, "ASV_DHS_N")
    assert 0.85 <= nugget_ec <= 0.98


def test_nugget_repairs_coverage_on_smooth_sv():
    paths = generate_paths(1, 300, 10, seed=2024)
    _, dhs_ec = _score(paths, "ASV_DHS")
    _, nugget_ec = _score(paths, "ASV_DHS_N")
    assert nugget_ec - dhs_ec > 0.10


def test_trend_filter_on_cyclic_mean_and_variance():
    T = 600
    t = np.arange(1, T + 1)
    rng = np.random.default_rng(7)
    beta = 80.0 + 60.0 * np.sin(2 * np.pi * t / 132)
    h = 3.0 + 1.5 * np.sin(2 * np.pi * t / 132 + 1.0)
    sigma = np.exp(0.5 * h)
    y = beta + sigma * rng.standard_normal(T)

    draws = run_chain(y, ModelSpec(variant="BTF_ASV", **BUDGET), progress=False)
    assert np.corrcoef(draws.mean("beta"), beta)[0, 1] > 0.95
    joint_mae = mae(sigma, VolEstimate.from_draws(draws))

    # same model for the variance with the true trend removed
    oracle = run_chain(y - beta, ModelSpec(variant="ASV_DHS", **BUDGET), progress=False)
    assert joint_mae < 1.5 * mae(sigma, VolEstimate.from_draws(oracle))


def test_shrinkage_flags_the_regime_switch():
    # low regime for 150 steps, then high
    regime = np.r_[np.zeros(151, dtype=int), np.ones(150, dtype=int)]
    path: SimPath = sv_path_from_regimes(regime, (-10.0, 6.0), np.random.default_rng(3))
    switch = 150

    draws = run_chain(path.y, ModelSpec(variant="ASV_DHS", **BUDGET), progress=False)
    flags = kappa_flags(draws.field("v"), threshold=0.9)
    flags = flags[flags >= 1]

    assert np.any(np.abs(flags - switch) <= 10)
    assert not np.any((flags >= 20) & (flags < 120))
