from __future__ import annotations

from typing import Iterable, List, Mapping

import pandas as pd

METRICS = ("mae", "ec", "mciw")


def per_path_table(rows: Iterable[Mapping]) -> pd.DataFrame:
    """One row per (dgp, path, variant) with the three metrics, sorted for stable output."""
    frame = pd.DataFrame(list(rows))
    if frame.empty:
        return pd.DataFrame(columns=["dgp", "path", "variant", *METRICS])
    keys = [c for c in ("dgp", "path", "variant") if c in frame.columns]
    return frame.sort_values(keys, kind="mergesort").reset_index(drop=True)


def aggregate_table(per_path: pd.DataFrame) -> pd.DataFrame:
    """Mean and sd across paths of every metric, one row per (dgp, variant)."""
    keys = [c for c in ("dgp", "variant") if c in per_path.columns]
    grouped = per_path.groupby(keys, sort=True)[list(METRICS)]
    mean = grouped.mean().add_suffix("_mean")
    sd = grouped.std(ddof=1).add_suffix("_sd")
    ordered: List[str] = [f"{m}_{s}" for m in METRICS for s in ("mean", "sd")]
    return mean.join(sd)[ordered].reset_index()
