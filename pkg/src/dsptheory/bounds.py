from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm

from src.dsptheory.stationary import stationary_density_lambda

K_LOWER = 1.0 / (8.0 * np.sqrt(2.0 * np.pi))
K_UPPER = 1.0 / (2.0 * np.sqrt(2.0 * np.pi))


class UnboundedDensityError(ValueError):
    """
    Raised at dh = 0, where the marginal density of the increment is infinite.
    """
    def __init__(self):
        super().__init__("The marginal density of dh is unbounded at dh = 0")


def marginal_bounds_delta_h(dh: float) -> Tuple[float, float]:
    """K_L log(1 + 4 / dh^2) and K_U log(1 + 2 / dh^2)."""
    if dh == 0:
        raise UnboundedDensityError()
    dh2 = float(dh) ** 2
    return K_LOWER * np.log1p(4.0 / dh2), K_UPPER * np.log1p(2.0 / dh2)


def marginal_density_delta_h(dh: float, epsabs: float = 1e-10) -> float:
    """
    Integral over lambda of N(dh | 0, lambda^2) f(lambda), split at |dh| where the kernel peaks.
    """
    if dh == 0:
        raise UnboundedDensityError()
    scale = abs(float(dh))

    def integrand(lam: float) -> float:
        if lam <= 0:
            return 0.0
        return float(norm.pdf(dh, scale=lam) * stationary_density_lambda(lam))

    head, _ = quad(integrand, 0.0, scale, epsabs=epsabs, limit=200)
    tail, _ = quad(integrand, scale, np.inf, epsabs=epsabs, limit=200)
    return head + tail
