from __future__ import annotations

from typing import Tuple, Union

import numpy as np
from scipy.optimize import brentq

from src.dsptheory.stationary import stationary_density_lambda

ArrayLike = Union[float, np.ndarray]


def horseshoe_density_lambda(lam: ArrayLike) -> ArrayLike:
    """Half-Cauchy: 2 / (pi (1 + lambda^2))."""
    lam = np.asarray(lam, dtype=float)
    return np.where(lam > 0, 2.0 / (np.pi * (1.0 + lam ** 2)), 0.0)


def horseshoe_density_kappa(kappa: ArrayLike) -> ArrayLike:
    """Beta(1/2, 1/2): 1 / (pi sqrt(kappa (1 - kappa)))."""
    kappa = np.asarray(kappa, dtype=float)
    inside = (kappa > 0) & (kappa < 1)
    k = np.where(inside, kappa, 0.5)
    return np.where(inside, 1.0 / (np.pi * np.sqrt(k * (1.0 - k))), 0.0)


def crossing_points() -> Tuple[float, float]:
    """
    Where the stationary lambda density meets the half-Cauchy.

    f > g on (0, lower) and (upper, inf), f < g between.
    """
    root = np.sqrt((4.0 - np.pi) * np.pi)
    return (2.0 - root) / (np.pi - 2.0), (2.0 + root) / (np.pi - 2.0)


def crossing_points_numeric(xtol: float = 1e-14) -> Tuple[float, float]:
    def gap(lam: float) -> float:
        return float(stationary_density_lambda(lam) - horseshoe_density_lambda(lam))

    # f - g changes sign once on each side of lambda = 1
    return brentq(gap, 1e-6, 1.0, xtol=xtol), brentq(gap, 1.0, 100.0, xtol=xtol)
