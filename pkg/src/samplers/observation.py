"""
Observation-side kernels: mixture indicators j, the log-variance path h, and the nugget layer.

All kernels are pure: they read what they condition on and return the new block.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np

from src.dist.conjugate import sample_inverse_gamma
from src.dist.mixture import OmoriMixture, sample_mixture_indicators
from src.linalg.banded import BandedSPD, build_Qv, sample_gaussian_canonical

NUGGET_PRIOR = (2.0, 0.1)


def log_square(x: np.ndarray, offset_c: float) -> np.ndarray:
    return np.log(np.square(np.asarray(x, dtype=float)) + offset_c)


def update_j(h: np.ndarray, y_star: np.ndarray, mixture: OmoriMixture, rng: np.random.Generator) -> np.ndarray:
    """Independent 10-way draws with weights p_k N(y*_t | h_t + m_k, w2_k)."""
    return sample_mixture_indicators(y_star - h, mixture.m, mixture.w2, mixture.p, rng)


# ---------------------
# h block
# ---------------------
def h_posterior(v: np.ndarray, j: np.ndarray, y_star: np.ndarray, mixture: OmoriMixture, k: int) -> Tuple[BandedSPD, np.ndarray]:
    """Canonical (precision, linear term) of h given (j, v, y*)."""
    means, variances = mixture.component(j)
    Q = build_Qv(v, k).add_diagonal(1.0 / variances)
    return Q, (y_star - means) / variances


def update_h(
    v: np.ndarray,
    j: np.ndarray,
    y_star: np.ndarray,
    mixture: OmoriMixture,
    k: int,
    rng: np.random.Generator,
) -> np.ndarray:
    Q, linear = h_posterior(v, j, y_star, mixture, k)
    return sample_gaussian_canonical(Q, linear, rng)


def h_star_collapsed_posterior(
    v: np.ndarray,
    j: np.ndarray,
    y_star: np.ndarray,
    sigma2_c: float,
    mixture: OmoriMixture,
    k: int,
) -> Tuple[BandedSPD, np.ndarray]:
    """h* given (j, v, y*, sigma2_c) with the nugget h - h* integrated out."""
    means, variances = mixture.component(j)
    total = sigma2_c + variances
    Q = build_Qv(v, k).add_diagonal(1.0 / total)
    return Q, (y_star - means) / total


def update_h_nugget(
    v: np.ndarray,
    j: np.ndarray,
    y_star: np.ndarray,
    sigma2_c: float,
    mixture: OmoriMixture,
    k: int,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw (h*, h) for the nugget model.

    h* is drawn jointly with h collapsed out, then each h_t | h*_t, y*_t combines the nugget
    N(h*_t, sigma2_c) with the mixture component N(y*_t - m_j, w2_j).

    Returns:
        (h_star, h)
    """
    Q, linear = h_star_collapsed_posterior(v, j, y_star, sigma2_c, mixture, k)
    h_star = sample_gaussian_canonical(Q, linear, rng)

    means, variances = mixture.component(j)
    prec = 1.0 / sigma2_c + 1.0 / variances
    mean = (h_star / sigma2_c + (y_star - means) / variances) / prec
    h = mean + rng.standard_normal(h_star.size) / np.sqrt(prec)
    return h_star, h


def h_star_posterior(v: np.ndarray, h: np.ndarray, sigma2_c: float, k: int) -> Tuple[BandedSPD, np.ndarray]:
    Q = build_Qv(v, k).add_diagonal(np.full(h.size, 1.0 / sigma2_c))
    return Q, h / sigma2_c


def update_nugget(
    h: np.ndarray,
    h_star: np.ndarray,
    v: np.ndarray,
    k: int,
    rng: np.random.Generator,
    prior: Tuple[float, float] = NUGGET_PRIOR,
) -> Tuple[np.ndarray, float]:
    """
    sigma2_c from its inverse-gamma conditional given h - h*, then h* given (h, v, sigma2_c).

    Returns:
        (h_star, sigma2_c)
    """
    resid = h - h_star
    sigma2_c = float(sample_inverse_gamma(prior[0] + 0.5 * h.size, prior[1] + 0.5 * np.dot(resid, resid), rng))
    Q, linear = h_star_posterior(v, h, sigma2_c, k)
    return sample_gaussian_canonical(Q, linear, rng), sigma2_c
