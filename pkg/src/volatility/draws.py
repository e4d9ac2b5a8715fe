from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.app.schemas.model import Variant
from src.volatility.state import ChainState

# name -> (getter, is_path)
_GETTERS: Dict[str, Tuple[Callable[[ChainState], object], bool]] = {
    "h": (lambda s: s.h, True),
    "v": (lambda s: s.evolution.v, True),
    "mu": (lambda s: s.evolution.mu, False),
    "phi": (lambda s: s.evolution.phi, False),
    "xi_mu": (lambda s: s.evolution.xi_mu, False),
    "h_star": (lambda s: s.h_star, True),
    "sigma2_c": (lambda s: s.sigma2_c, False),
    "sigma2_h": (lambda s: s.sigma2_h, False),
    "lambda2_bl": (lambda s: s.lambda2_bl, False),
    "beta": (lambda s: s.beta, True),
    "v_beta": (lambda s: s.beta_evolution.v, True),
    "mu_beta": (lambda s: s.beta_evolution.mu, False),
    "phi_beta": (lambda s: s.beta_evolution.phi, False),
}


def recorded_fields(variant: Variant) -> List[str]:
    """Ordered names of the blocks kept for each retained draw."""
    names = ["h", "v"]
    if variant.uses_dsp:
        names += ["mu", "phi", "xi_mu"]
    if variant.has_nugget:
        names += ["h_star", "sigma2_c"]
    if variant == Variant.RWSV:
        names += ["sigma2_h"]
    if variant == Variant.RWSV_BL:
        names += ["lambda2_bl"]
    if variant == Variant.BTF_ASV:
        names += ["beta", "v_beta", "mu_beta", "phi_beta"]
    return names


def field_layout(names: Sequence[str], T: int) -> Dict[str, slice]:
    layout, offset = {}, 0
    for name in names:
        width = T if _GETTERS[name][1] else 1
        layout[name] = slice(offset, offset + width)
        offset += width
    return layout


@dataclass
class PosteriorDraws:
    """
    Retained post-burn-in draws, one row per kept sweep.

    Columns are grouped into named blocks by `fields`; path blocks span T columns, scalars one.
    """
    draws: np.ndarray
    fields: Dict[str, slice]
    variant: Variant
    T: int
    seed: int = 0
    chain_id: int = 0
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def n_keep(self) -> int:
        return int(self.draws.shape[0])

    def has(self, name: str) -> bool:
        return name in self.fields

    def field(self, name: str) -> np.ndarray:
        """Draws of one block: (n_keep, T) for paths, (n_keep,) for scalars."""
        if name not in self.fields:
            raise KeyError(f"No recorded block '{name}' for variant {self.variant.value}; have {list(self.fields)}")
        block = self.draws[:, self.fields[name]]
        return block if _GETTERS[name][1] else block[:, 0]

    def mean(self, name: str) -> np.ndarray:
        return self.field(name).mean(axis=0)

    def sd(self, name: str) -> np.ndarray:
        values = self.field(name)
        return values.std(axis=0, ddof=1) if self.n_keep > 1 else np.zeros_like(values[0], dtype=float)

    def quantile(self, name: str, q: float) -> np.ndarray:
        if not 0.0 < q < 1.0:
            raise ValueError(f"quantile level must lie in (0, 1), got {q}")
        return np.quantile(self.field(name), q, axis=0)

    def summarize(self, name: str = "h", quantiles: Sequence[float] = (0.05, 0.95), transform: Optional[Callable] = None) -> pd.DataFrame:
        """
        Per-time mean and quantile columns for a path block.

        `transform` is applied to every draw before summarizing, e.g. exp(h / 2) for sigma.
        """
        values = self.field(name)
        if values.ndim == 1:
            values = values[:, None]
        if transform is not None:
            values = transform(values)

        frame = pd.DataFrame({"t": np.arange(1, values.shape[1] + 1)})
        frame["mean"] = values.mean(axis=0)
        qs = np.quantile(values, sorted(quantiles), axis=0)
        for q, row in zip(sorted(quantiles), qs):
            frame[f"q{int(round(q * 100)):02d}"] = row
        return frame

    def sigma_draws(self) -> np.ndarray:
        return np.exp(0.5 * self.field("h"))

    def scalar_names(self) -> List[str]:
        return [name for name in self.fields if not _GETTERS[name][1]]


class DrawRecorder:
    """Preallocated store the runner fills row by row."""

    def __init__(self, variant: Variant, T: int, n_keep: int):
        self.variant = variant
        self.T = T
        self.names = recorded_fields(variant)
        self.layout = field_layout(self.names, T)
        width = max(sl.stop for sl in self.layout.values())
        self.buffer = np.empty((n_keep, width))
        self.row = 0

    def record(self, state: ChainState) -> None:
        if self.row >= self.buffer.shape[0]:
            raise IndexError("draw buffer is full")
        out = self.buffer[self.row]
        for name in self.names:
            out[self.layout[name]] = _GETTERS[name][0](state)
        self.row += 1

    def finish(self, seed: int = 0, chain_id: int = 0, **meta) -> PosteriorDraws:
        return PosteriorDraws(
            draws=self.buffer[: self.row].copy(),
            fields=dict(self.layout),
            variant=self.variant,
            T=self.T,
            seed=seed,
            chain_id=chain_id,
            meta=dict(meta),
        )
