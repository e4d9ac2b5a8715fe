from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import periodogram
from scipy.stats import norm


@dataclass(frozen=True)
class TraceStability:
    z: float
    p_value: float
    stable: bool


def _spectral_var(x: np.ndarray) -> float:
    """Long-run variance of the mean from the low-frequency periodogram, falling back to the sample variance."""
    if x.size < 8:
        return float(np.var(x, ddof=1)) / x.size
    _, power = periodogram(x - x.mean(), detrend=False, scaling="density")
    low = power[1 : max(2, x.size // 20)]
    s0 = float(np.mean(low)) / 2.0 if low.size else float(np.var(x, ddof=1))
    return max(s0, np.finfo(float).tiny) / x.size


def trace_stability(trace: np.ndarray, first: float = 0.1, last: float = 0.5, alpha: float = 0.01) -> TraceStability:
    """
    Compare the mean of the first 10% of a trace with the last 50% (z-score with spectral variances).
    """
    trace = np.asarray(trace, dtype=float)
    n = trace.size
    a, b = trace[: max(2, int(first * n))], trace[n - max(2, int(last * n)):]
    if np.ptp(trace) == 0:
        return TraceStability(z=0.0, p_value=1.0, stable=True)

    z = float((a.mean() - b.mean()) / np.sqrt(_spectral_var(a) + _spectral_var(b)))
    p = float(2.0 * norm.sf(abs(z)))
    return TraceStability(z=z, p_value=p, stable=p > alpha)
