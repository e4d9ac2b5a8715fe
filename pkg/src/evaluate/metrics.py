from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.volatility.draws import PosteriorDraws


@dataclass(frozen=True)
class VolEstimate:
    """Point estimate and equal-tailed 90% band of sigma_t = exp(h_t / 2)."""
    point: np.ndarray
    q05: np.ndarray
    q95: np.ndarray

    def __post_init__(self):
        if not (self.point.shape == self.q05.shape == self.q95.shape):
            raise ValueError("point, q05 and q95 must have equal length")
        if np.any(self.q05 > self.q95):
            raise ValueError("q05 must not exceed q95")

    @classmethod
    def from_draws(cls, draws: PosteriorDraws) -> "VolEstimate":
        sigma = draws.sigma_draws()
        q05, q95 = np.quantile(sigma, [0.05, 0.95], axis=0)
        return cls(point=sigma.mean(axis=0), q05=q05, q95=q95)


def _check(truth: np.ndarray, est: VolEstimate) -> np.ndarray:
    truth = np.asarray(truth, dtype=float)
    if truth.shape != est.point.shape:
        raise ValueError(f"length mismatch: truth {truth.shape[0]} vs estimate {est.point.shape[0]}")
    return truth


def mae(truth: np.ndarray, est: VolEstimate) -> float:
    truth = _check(truth, est)
    return float(np.mean(np.abs(truth - est.point)))


def ec(truth: np.ndarray, est: VolEstimate) -> float:
    """Share of t with q05 < sigma_t < q95 (strict)."""
    truth = _check(truth, est)
    return float(np.mean((truth > est.q05) & (truth < est.q95)))


def mciw(est: VolEstimate) -> float:
    return float(np.mean(est.q95 - est.q05))


def score(truth: np.ndarray, est: VolEstimate) -> dict:
    return {"mae": mae(truth, est), "ec": ec(truth, est), "mciw": mciw(est)}
