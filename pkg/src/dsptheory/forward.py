from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

from src.dist.zdist import ZDistParams, sample_z
from src.dsptheory.stationary import DSPStationary


def forward_simulate_dsp(
    params: DSPStationary,
    T: int,
    rng: np.random.Generator,
    burn: int = 200,
    thin: int = 1,
    innovations: ZDistParams = ZDistParams(),
) -> np.ndarray:
    """
    v_t = mu + phi (v_{t-1} - mu) + eta_t with Z-distributed eta, started at mu.

    Returns T values taken every `thin` steps after `burn` steps.
    """
    if T < 1 or thin < 1 or burn < 0:
        raise ValueError("T and thin must be positive, burn non-negative")
    n = burn + T * thin
    eta = sample_z(innovations, n, rng)
    z = lfilter([1.0], [1.0, -params.phi], eta)
    return params.mu + z[burn::thin][:T]
