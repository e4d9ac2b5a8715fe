from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


@dataclass
class DSPState:
    """
    Latent blocks of one dynamic shrinkage process on log evolution variances.

    `v` follows v_1 = mu + eta_1, v_t = mu + phi (v_{t-1} - mu) + eta_t; `xi` are the Polya-Gamma
    scales of the eta_t, `s` the 1-based mixture labels of the log-square transform.
    """
    v: np.ndarray
    s: np.ndarray
    xi: np.ndarray
    mu: float = 0.0
    xi_mu: float = 1.0
    phi: float = 0.0

    @classmethod
    def initial(cls, T: int, mu: float, phi: float) -> "DSPState":
        return cls(
            v=np.zeros(T),
            s=np.ones(T, dtype=np.int64),
            xi=np.ones(T),
            mu=float(mu),
            xi_mu=1.0,
            phi=float(phi),
        )

    def problems(self, prefix: str = "") -> List[str]:
        out = []
        if not np.all(np.isfinite(self.v)) or not np.all(np.exp(self.v) > 0):
            out.append(f"{prefix}v")
        if not np.all(np.isfinite(self.xi)) or not np.all(self.xi > 0):
            out.append(f"{prefix}xi")
        if not np.isfinite(self.mu):
            out.append(f"{prefix}mu")
        if not (np.isfinite(self.xi_mu) and self.xi_mu > 0):
            out.append(f"{prefix}xi_mu")
        if not (abs(self.phi) < 1.0):
            out.append(f"{prefix}phi")
        return out

    def copy(self) -> "DSPState":
        return DSPState(self.v.copy(), self.s.copy(), self.xi.copy(), self.mu, self.xi_mu, self.phi)


@dataclass
class ChainState:
    """
    Everything one Gibbs sweep reads and writes.

    `evolution` carries v for every variant; for the random-walk baselines only its `v` is used
    (v_1 is the diffuse initial-level log variance, v_t for t >= 2 the increment log variances).
    Optional blocks stay None for variants that do not have them.
    """
    h: np.ndarray
    j: np.ndarray
    evolution: DSPState
    h_star: Optional[np.ndarray] = None
    sigma2_c: Optional[float] = None
    beta: Optional[np.ndarray] = None
    beta_evolution: Optional[DSPState] = None
    sigma2_h: Optional[float] = None
    sigma2_t_bl: Optional[np.ndarray] = field(default=None)
    lambda2_bl: Optional[float] = None

    # delegates to the volatility-block DSP
    @property
    def v(self) -> np.ndarray:
        return self.evolution.v

    @property
    def s(self) -> np.ndarray:
        return self.evolution.s

    @property
    def xi(self) -> np.ndarray:
        return self.evolution.xi

    @property
    def mu(self) -> float:
        return self.evolution.mu

    @property
    def xi_mu(self) -> float:
        return self.evolution.xi_mu

    @property
    def phi(self) -> float:
        return self.evolution.phi

    @property
    def T(self) -> int:
        return int(self.h.size)

    @property
    def smooth_h(self) -> np.ndarray:
        """The path the evolution prior sits on: h* with a nugget, h otherwise."""
        return self.h_star if self.h_star is not None else self.h

    def problems(self) -> List[str]:
        """Names of blocks that break the state invariants (empty when valid)."""
        out = []
        if not np.all(np.isfinite(self.h)):
            out.append("h")
        if self.h_star is not None and not np.all(np.isfinite(self.h_star)):
            out.append("h_star")
        if self.sigma2_c is not None and not (np.isfinite(self.sigma2_c) and self.sigma2_c > 0):
            out.append("sigma2_c")
        if self.sigma2_h is not None and not (np.isfinite(self.sigma2_h) and self.sigma2_h > 0):
            out.append("sigma2_h")
        if self.sigma2_t_bl is not None and not (np.all(np.isfinite(self.sigma2_t_bl)) and np.all(self.sigma2_t_bl > 0)):
            out.append("sigma2_t_bl")
        if self.lambda2_bl is not None and not (np.isfinite(self.lambda2_bl) and self.lambda2_bl > 0):
            out.append("lambda2_bl")
        if self.beta is not None and not np.all(np.isfinite(self.beta)):
            out.append("beta")

        out.extend(self.evolution.problems())
        if self.beta_evolution is not None:
            out.extend(self.beta_evolution.problems(prefix="beta_"))
        return out

    def is_valid(self) -> bool:
        return not self.problems()
