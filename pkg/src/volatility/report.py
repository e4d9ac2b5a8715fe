from __future__ import annotations

from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.evaluate.kappa import KAPPA_THRESHOLD, kappa_mean
from src.volatility.draws import PosteriorDraws


def _band(draws: np.ndarray, prefix: str, t: np.ndarray, labels: List[str]) -> pd.DataFrame:
    q05, q95 = np.quantile(draws, [0.05, 0.95], axis=0)
    return pd.DataFrame({
        "t": t,
        "label": labels,
        f"{prefix}_mean": draws.mean(axis=0),
        f"{prefix}_q05": q05,
        f"{prefix}_q95": q95,
    })


def posterior_frames(
    draws: PosteriorDraws,
    labels: Optional[List[str]] = None,
    kappa_threshold: float = KAPPA_THRESHOLD,
    initial: int = 0,
) -> Dict[str, pd.DataFrame]:
    """
    Plot-ready summaries keyed by output file name.

    h and sigma = exp(h / 2) bands, v with mean shrinkage kappa and its threshold flag, posterior
    mean/sd of every scalar, and the trend band for the joint mean model. The first `initial`
    entries of v belong to the initial levels, not to differences, and are never flagged.
    """
    t = np.arange(1, draws.T + 1)
    labels = labels if labels is not None else [""] * draws.T

    frames = {
        "h_summary.csv": _band(draws.field("h"), "h", t, labels),
        "sigma_summary.csv": _band(draws.sigma_draws(), "sigma", t, labels),
    }

    v = draws.field("v")
    v_frame = _band(v, "v", t, labels)
    kappa = kappa_mean(v)
    flag = kappa < kappa_threshold
    v_frame["kappa_mean"] = kappa
    flag[:initial] = False
    v_frame["flag"] = flag.astype(int)
    frames["v_summary.csv"] = v_frame

    scalars = draws.scalar_names()
    frames["scalars.csv"] = pd.DataFrame({
        "param": scalars,
        "mean": [float(draws.mean(name)) for name in scalars],
        "sd": [float(draws.sd(name)) for name in scalars],
    })

    if draws.has("beta"):
        frames["beta_summary.csv"] = _band(draws.field("beta"), "beta", t, labels)
    return frames
