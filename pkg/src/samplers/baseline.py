"""
Random-walk baselines: RWSV with one inverse-gamma evolution variance, RWSV-BL with Bayesian-LASSO
increment variances. Both put a fixed diffuse N(0, 10^2) prior on the first level.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np

from src.dist.conjugate import sample_gamma, sample_inverse_gamma, sample_inverse_gaussian

RWSV_PRIOR = (0.01, 0.01)
LASSO_PRIOR = (1.0, 1.0)
INITIAL_LEVEL_VAR = 100.0


def rw_log_variances(increment_var: np.ndarray | float, T: int) -> np.ndarray:
    """v for the level-path precision: log 10^2 for h_1, log increment variance after."""
    v = np.empty(T)
    v[0] = np.log(INITIAL_LEVEL_VAR)
    v[1:] = np.log(increment_var)
    return v


def update_rwsv_variance(h: np.ndarray, rng: np.random.Generator, prior: Tuple[float, float] = RWSV_PRIOR) -> float:
    """sigma2_h | h ~ IG(0.01 + (T - 1) / 2, 0.01 + sum(dh^2) / 2)."""
    dh = np.diff(h)
    return float(sample_inverse_gamma(prior[0] + 0.5 * dh.size, prior[1] + 0.5 * np.dot(dh, dh), rng))


def update_lasso(
    h: np.ndarray,
    lambda2: float,
    rng: np.random.Generator,
    offset_c: float = 1e-8,
    prior: Tuple[float, float] = LASSO_PRIOR,
) -> Tuple[np.ndarray, float]:
    """
    Park-Casella updates for the increment variances and the LASSO rate.

    1 / sigma2_t ~ InvGauss(sqrt(lambda2 / dh_t^2), lambda2), dh_t^2 floored at `offset_c`;
    lambda2 ~ Gamma(r + n, delta + sum(sigma2_t) / 2) over the n = T - 1 increments.

    The shape counts T - 1 increment variances, not T: h_1 carries the fixed diffuse level prior
    and has no sigma2_t of its own.

    Returns:
        (sigma2_t of length T - 1, lambda2)
    """
    dh2 = np.maximum(np.square(np.diff(h)), offset_c)
    precision = sample_inverse_gaussian(np.sqrt(lambda2 / dh2), lambda2, rng)
    sigma2 = 1.0 / np.asarray(precision, dtype=float)
    lambda2_new = float(sample_gamma(prior[0] + sigma2.size, prior[1] + 0.5 * sigma2.sum(), rng))
    return sigma2, lambda2_new


def sample_lasso_increments(lambda2: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Prior increments: sigma2 ~ Exp(mean 2 / lambda2), dh | sigma2 ~ N(0, sigma2). Marginally Laplace."""
    sigma2 = rng.exponential(2.0 / lambda2, size=size)
    return np.sqrt(sigma2) * rng.standard_normal(size)
