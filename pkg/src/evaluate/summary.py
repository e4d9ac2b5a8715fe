from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import kurtosis

CP_MULTIPLIER = 5.0


@dataclass(frozen=True)
class SummaryStats:
    mean_abs_diff: float
    excess_kurtosis: float
    cp_count: int
    cp_undefined: bool = False


def summary_stats(h_hat: np.ndarray) -> SummaryStats:
    """
    Shape summaries of an estimated log-variance path from its first differences.

    Kurtosis is reported as excess kurtosis (0 for Gaussian increments). CP counts |dh| above
    5 sd(dh); with zero spread it is 0 and flagged undefined.
    """
    h_hat = np.asarray(h_hat, dtype=float)
    if h_hat.size < 3:
        raise ValueError(f"summary statistics need T >= 3, got {h_hat.size}")

    dh = np.diff(h_hat)
    sd = float(np.std(dh, ddof=1))
    mean_abs = float(np.mean(np.abs(dh)))

    if sd == 0.0:
        return SummaryStats(mean_abs_diff=mean_abs, excess_kurtosis=float("nan"), cp_count=0, cp_undefined=True)

    return SummaryStats(
        mean_abs_diff=mean_abs,
        excess_kurtosis=float(kurtosis(dh, fisher=True, bias=True)),
        cp_count=int(np.sum(np.abs(dh) > CP_MULTIPLIER * sd)),
    )
