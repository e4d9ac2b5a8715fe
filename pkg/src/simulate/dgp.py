"""
The eight benchmark data-generating processes.

1   SV, mean 3, phi 0.8, sd 0.2
2/3 regime-switching SV with means (-10, 6) / (-10, -3, 3), stay probability 0.98
4   GARCH(1, 1) with omega 1, alpha 0.1, beta 0.5
5/6 regime-switching GARCH, alpha 0.15, (m, beta) per regime
7   random sinusoid in h
8   piecewise-constant h on blocks of 25 with alternating sign
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

SV_PHI = 0.8
SV_SD = 0.2
STAY = 0.98

SV_MEANS = {1: (3.0,), 2: (-10.0, 6.0), 3: (-10.0, -3.0, 3.0)}
GARCH_ALPHA = 0.15
GARCH_REGIMES = {
    5: ((8.0, 0.1), (0.8, 0.3)),
    6: ((12.0, 8.0, 0.1), (0.8, 0.5, 0.2)),
}
BLOCK = 25


@dataclass(frozen=True)
class DGPSpec:
    id: int
    T: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.id not in range(1, 9):
            raise ValueError(f"DGP id must be 1..8, got {self.id}")
        if self.T < 2:
            raise ValueError(f"T must be at least 2, got {self.T}")


@dataclass(frozen=True)
class SimPath:
    y: np.ndarray
    sigma_true: np.ndarray
    regime: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.y.shape != self.sigma_true.shape:
            raise ValueError("y and sigma_true must have equal length")
        if self.regime is not None and self.regime.shape != self.y.shape:
            raise ValueError("regime path must match y in length")
        if np.any(self.sigma_true <= 0):
            raise ValueError("sigma_true must be positive")

    @property
    def T(self) -> int:
        return int(self.y.size)

    @property
    def h_true(self) -> np.ndarray:
        return 2.0 * np.log(self.sigma_true)


def transition_matrix(n_states: int, stay: float = STAY) -> np.ndarray:
    """Stay with probability `stay`, otherwise move to each other state equally."""
    if n_states == 1:
        return np.ones((1, 1))
    P = np.full((n_states, n_states), (1.0 - stay) / (n_states - 1))
    np.fill_diagonal(P, stay)
    return P


def simulate_regimes(n_states: int, T: int, rng: np.random.Generator, stay: float = STAY) -> np.ndarray:
    """Markov chain s_0..s_T with a uniform initial state; returns length T + 1."""
    cum = np.cumsum(transition_matrix(n_states, stay), axis=1)
    s = np.empty(T + 1, dtype=np.int64)
    s[0] = rng.integers(n_states)
    u = rng.random(T)
    for t in range(1, T + 1):
        s[t] = min(int(np.searchsorted(cum[s[t - 1]], u[t - 1], side="right")), n_states - 1)
    return s


def _observe(sigma: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return sigma * rng.standard_normal(sigma.size)


def sv_path_from_regimes(
    regime: Sequence[int],
    means: Sequence[float],
    rng: np.random.Generator,
    phi: float = SV_PHI,
    sd: float = SV_SD,
) -> SimPath:
    """
    h_t = m_{s_t} + phi (h_{t-1} - m_{s_{t-1}}) + sd u_t along a given regime path.

    `regime` holds s_0..s_T; h_0 = m_{s_0} and the returned path covers t = 1..T.
    """
    s = np.asarray(regime, dtype=np.int64)
    m = np.asarray(means, dtype=float)[s]
    u = rng.standard_normal(s.size - 1)

    h = np.empty(s.size)
    h[0] = m[0]
    for t in range(1, s.size):
        h[t] = m[t] + phi * (h[t - 1] - m[t - 1]) + sd * u[t - 1]

    sigma = np.exp(0.5 * h[1:])
    return SimPath(y=_observe(sigma, rng), sigma_true=sigma, regime=s[1:])


def _garch(T: int, omega: np.ndarray, beta: np.ndarray, alpha: float, sigma2_first: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    sigma2 = np.empty(T)
    y = np.empty(T)
    z = rng.standard_normal(T)
    sigma2[0] = sigma2_first
    y[0] = np.sqrt(sigma2[0]) * z[0]
    for t in range(1, T):
        sigma2[t] = omega[t] + alpha * y[t - 1] ** 2 + beta[t] * sigma2[t - 1]
        y[t] = np.sqrt(sigma2[t]) * z[t]
    return y, np.sqrt(sigma2)


def generate(spec: DGPSpec, rng: Optional[np.random.Generator] = None) -> SimPath:
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    T, dgp = spec.T, spec.id

    if dgp in SV_MEANS:
        means = SV_MEANS[dgp]
        regime = simulate_regimes(len(means), T, rng)
        path = sv_path_from_regimes(regime, means, rng)
        return path if dgp > 1 else SimPath(y=path.y, sigma_true=path.sigma_true)

    if dgp == 4:
        y, sigma = _garch(T, np.ones(T), np.full(T, 0.5), 0.1, 1.0 / (1.0 - 0.1 - 0.5), rng)
        return SimPath(y=y, sigma_true=sigma)

    if dgp in GARCH_REGIMES:
        m, b = (np.asarray(x) for x in GARCH_REGIMES[dgp])
        s = simulate_regimes(m.size, T, rng)[1:]
        first = m[s[0]] / (1.0 - GARCH_ALPHA - b[s[0]])
        y, sigma = _garch(T, m[s], b[s], GARCH_ALPHA, first, rng)
        return SimPath(y=y, sigma_true=sigma, regime=s)

    if dgp == 7:
        A, B, C, D = rng.uniform(0.0, 5.0, size=4)
        t = np.arange(1, T + 1)
        fast, slow = 10 * 2 * np.pi * t / T, 3 * 2 * np.pi * t / T
        h = A * np.sin(fast) + B * np.cos(fast) + C * np.sin(slow) + D * np.cos(slow)
        sigma = np.exp(0.5 * h)
        return SimPath(y=_observe(sigma, rng), sigma_true=sigma)

    # dgp 8: block j = t // 25 + 1 for t = 0..T-1
    block = np.arange(T) // BLOCK + 1
    n_blocks = int(block[-1])
    j = np.arange(1, n_blocks + 1)
    z = np.where(j % 2 == 0, rng.normal(5.0, 0.5, n_blocks), rng.normal(0.0, 0.5, n_blocks))
    level = (-1.0) ** j * np.abs(z)
    sigma = np.exp(0.5 * level[block - 1])
    return SimPath(y=_observe(sigma, rng), sigma_true=sigma, regime=block)


def generate_path(dgp: int, T: int, seed: int, index: int) -> SimPath:
    """Path `index` of a `generate_paths` batch, drawn on its own."""
    return generate(DGPSpec(id=dgp, T=T, seed=seed), np.random.default_rng([seed, index]))


def generate_paths(dgp: int, T: int, n_paths: int, seed: int = 0) -> List[SimPath]:
    """Path i is generated from default_rng([seed, i]) so any path can be redrawn on its own."""
    return [generate_path(dgp, T, seed, i) for i in range(n_paths)]
