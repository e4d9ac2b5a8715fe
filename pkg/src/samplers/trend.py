"""Time-varying mean block of the joint trend-filter model."""
from __future__ import annotations

from typing import Tuple

import numpy as np

from src.linalg.banded import BandedSPD, build_Qv, sample_gaussian_canonical


def beta_posterior(y: np.ndarray, h: np.ndarray, v_beta: np.ndarray, k_beta: int) -> Tuple[BandedSPD, np.ndarray]:
    """Precision Q_v(v_beta) + diag(exp(-h)), linear term y exp(-h)."""
    weight = np.exp(-h)
    return build_Qv(v_beta, k_beta).add_diagonal(weight), y * weight


def update_btf_mean(y: np.ndarray, h: np.ndarray, v_beta: np.ndarray, k_beta: int, rng: np.random.Generator) -> np.ndarray:
    Q, linear = beta_posterior(y, h, v_beta, k_beta)
    return sample_gaussian_canonical(Q, linear, rng)
