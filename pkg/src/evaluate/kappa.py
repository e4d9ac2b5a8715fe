from __future__ import annotations

import numpy as np
from scipy.special import expit

KAPPA_THRESHOLD = 0.9


def kappa_mean(v_draws: np.ndarray) -> np.ndarray:
    """Per-t posterior mean of kappa_t = 1 / (1 + exp(v_t)) over draws (rows)."""
    v_draws = np.atleast_2d(np.asarray(v_draws, dtype=float))
    if v_draws.shape[0] == 0:
        raise ValueError("need at least one draw of v")
    return expit(-v_draws).mean(axis=0)


def kappa_flags(v_draws: np.ndarray, threshold: float = KAPPA_THRESHOLD) -> np.ndarray:
    """0-based indices whose mean shrinkage drops below `threshold`, i.e. likely structural shifts."""
    return np.flatnonzero(kappa_mean(v_draws) < threshold)
