"""
Stationary law of the dynamic shrinkage process.

With horseshoe shapes the innovations have characteristic function sech(pi t), so the stationary
z = v - mu has CF prod_h sech(pi phi^h t), variance pi^2 / (1 - phi^2), and for phi = 0.5 exactly
the logistic law with scale 2. The closed-form densities below are for that case (phi = 0.5, mu = 0):
lambda = exp(v / 2) and kappa = 1 / (1 + exp(v)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import expit

ArrayLike = Union[float, np.ndarray]


class NonStationaryError(ValueError):
    """
    Raised when a stationary quantity is requested for |phi| >= 1.
    """
    def __init__(self, phi: float):
        super().__init__(f"The process is stationary only for |phi| < 1, got phi={phi}")
        self.phi = phi


@dataclass(frozen=True)
class DSPStationary:
    phi: float = 0.5
    mu: float = 0.0

    def __post_init__(self):
        if not abs(self.phi) < 1.0:
            raise NonStationaryError(self.phi)

    @property
    def variance(self) -> float:
        return stationary_variance(self.phi)


def stationary_variance(phi: float) -> float:
    if not abs(phi) < 1.0:
        raise NonStationaryError(phi)
    return float(np.pi ** 2 / (1.0 - phi ** 2))


# ---------------------
# Densities (phi = 0.5, mu = 0)
# ---------------------
def stationary_density_v(v: ArrayLike) -> ArrayLike:
    """(1/8) sech^2(v / 4): logistic with scale 2."""
    z = np.exp(-0.5 * np.abs(np.asarray(v, dtype=float)))
    return 0.5 * z / (1.0 + z) ** 2


def stationary_density_lambda(lam: ArrayLike) -> ArrayLike:
    lam = np.asarray(lam, dtype=float)
    return np.where(lam > 0, 1.0 / (1.0 + lam) ** 2, 0.0)


def stationary_density_kappa(kappa: ArrayLike) -> ArrayLike:
    kappa = np.asarray(kappa, dtype=float)
    inside = (kappa > 0) & (kappa < 1)
    k = np.where(inside, kappa, 0.5)
    a, b = np.sqrt(k), np.sqrt(1.0 - k)
    return np.where(inside, 1.0 / (2.0 * a * b * (a + b) ** 2), 0.0)


def stationary_cdf_v(v: ArrayLike) -> ArrayLike:
    return expit(np.asarray(v, dtype=float) / 2.0)


def stationary_cdf_lambda(lam: ArrayLike) -> ArrayLike:
    lam = np.maximum(np.asarray(lam, dtype=float), 0.0)
    return lam / (1.0 + lam)


def stationary_cdf_kappa(kappa: ArrayLike) -> ArrayLike:
    kappa = np.clip(np.asarray(kappa, dtype=float), 0.0, 1.0)
    a, b = np.sqrt(kappa), np.sqrt(1.0 - kappa)
    return a / (a + b)


# ---------------------
# CF / MGF partial products
# ---------------------
def _check_t(t: ArrayLike) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= 0.5):
        raise ValueError("products are evaluated on -1/2 < t < 1/2 only")
    return t


def cf_partial_product(t: ArrayLike, phi: float, n_terms: int) -> ArrayLike:
    """prod_{h=0}^{n_terms-1} sech(pi phi^h t)."""
    t = _check_t(t)
    powers = phi ** np.arange(n_terms)
    return np.prod(1.0 / np.cosh(np.pi * np.multiply.outer(t, powers)), axis=-1)


def mgf_partial_product(t: ArrayLike, phi: float, n_terms: int) -> ArrayLike:
    """prod_{h=0}^{n_terms-1} sec(pi phi^h t); stays bounded for |phi| < 1 and blows up otherwise."""
    t = _check_t(t)
    powers = phi ** np.arange(n_terms)
    with np.errstate(over="ignore"):
        return np.prod(1.0 / np.cos(np.pi * np.multiply.outer(t, powers)), axis=-1)
