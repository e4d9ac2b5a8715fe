import numpy as np
import pandas as pd
import pytest

from src.evaluate.diagnostics import trace_stability
from src.evaluate.kappa import kappa_flags, kappa_mean
from src.evaluate.metrics import VolEstimate, ec, mae, mciw, score
from src.evaluate.summary import summary_stats
from src.evaluate.tables import aggregate_table, per_path_table


@pytest.fixture()
def estimate():
    return VolEstimate(
        point=np.array([1.0, 2.0, 3.0, 4.0]),
        q05=np.array([0.5, 1.5, 2.5, 3.0]),
        q95=np.array([1.5, 2.5, 3.5, 5.0]),
    )


# -----------------------
# Metrics
# -----------------------
def test_metrics_hand_values(estimate):
    truth = np.array([1.5, 2.0, 2.0, 4.5])
    assert mae(truth, estimate) == pytest.approx((0.5 + 0.0 + 1.0 + 0.5) / 4)
    # 1.5 sits on the upper edge and does not count
    assert ec(truth, estimate) == pytest.approx(2 / 4)
    assert mciw(estimate) == pytest.approx((1.0 + 1.0 + 1.0 + 2.0) / 4)
    assert score(truth, estimate) == {"mae": 0.5, "ec": 0.5, "mciw": 1.25}


def test_metrics_length_mismatch(estimate):
    with pytest.raises(ValueError):
        mae(np.ones(3), estimate)


def test_band_ordering_is_enforced():
    with pytest.raises(ValueError):
        VolEstimate(point=np.ones(2), q05=np.array([1.0, 2.0]), q95=np.array([2.0, 1.0]))


# -----------------------
# Summary statistics
# -----------------------
def test_summary_stats_on_a_single_jump():
    h = np.r_[np.zeros(50), np.full(50, 4.0)]
    stats = summary_stats(h)
    assert stats.mean_abs_diff == pytest.approx(4.0 / 99)
    assert stats.cp_count == 1
    assert stats.excess_kurtosis > 0
    assert not stats.cp_undefined


def test_summary_stats_counts_large_jumps():
    rng = np.random.default_rng(0)
    h = np.cumsum(rng.normal(0.0, 0.1, size=1000))
    h[500:] += 10.0
    assert summary_stats(h).cp_count == 1


def test_summary_stats_constant_path():
    stats = summary_stats(np.ones(20))
    assert stats.cp_undefined
    assert stats.cp_count == 0
    assert np.isnan(stats.excess_kurtosis)
    with pytest.raises(ValueError):
        summary_stats(np.ones(2))


# -----------------------
# Shrinkage diagnostic
# -----------------------
def test_kappa_mean_and_flags():
    v = np.array([[0.0, -10.0, 5.0], [0.0, -10.0, 5.0]])
    kappa = kappa_mean(v)
    assert kappa[0] == pytest.approx(0.5)
    assert kappa[1] > 0.99
    assert kappa[2] < 0.01
    assert kappa_flags(v).tolist() == [0, 2]
    assert kappa_flags(v, threshold=0.4).tolist() == [2]


# -----------------------
# Trace stability
# -----------------------
def test_trace_stability_stationary_and_drifting():
    rng = np.random.default_rng(1)
    assert trace_stability(rng.normal(size=2000)).stable
    drift = trace_stability(np.linspace(0.0, 5.0, 2000) + rng.normal(0.0, 0.1, 2000))
    assert not drift.stable
    assert drift.z < 0
    assert trace_stability(np.ones(100)).stable


# -----------------------
# Tables
# -----------------------
def test_per_path_and_aggregate_tables():
    rows = [
        {"dgp": 8, "path": 1, "variant": "RWSV", "mae": 2.0, "ec": 0.8, "mciw": 1.0},
        {"dgp": 8, "path": 0, "variant": "RWSV", "mae": 1.0, "ec": 0.6, "mciw": 3.0},
        {"dgp": 8, "path": 0, "variant": "ASV_DHS", "mae": 0.5, "ec": 0.9, "mciw": 2.0},
        {"dgp": 8, "path": 1, "variant": "ASV_DHS", "mae": 0.7, "ec": 0.9, "mciw": 2.0},
    ]
    per_path = per_path_table(rows)
    assert per_path[["path", "variant"]].values.tolist()[0] == [0, "ASV_DHS"]

    summary = aggregate_table(per_path)
    assert list(summary.columns) == ["dgp", "variant", "mae_mean", "mae_sd", "ec_mean", "ec_sd", "mciw_mean", "mciw_sd"]
    rwsv = summary.set_index("variant").loc["RWSV"]
    assert rwsv["mae_mean"] == pytest.approx(1.5)
    assert rwsv["mae_sd"] == pytest.approx(np.sqrt(0.5))


def test_empty_per_path_table():
    assert isinstance(per_path_table([]), pd.DataFrame)
    assert per_path_table([]).empty
