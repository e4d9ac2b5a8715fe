from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.app.utils.artifacts import write_csv
from src.simulate.dgp import SimPath
from src.volatility.errors import SeriesFormatError

PATH_COLUMNS = ("t", "y", "sigma_true", "regime")


def path_frame(path: SimPath) -> pd.DataFrame:
    regime = pd.array(path.regime, dtype="Int64") if path.regime is not None else pd.array([pd.NA] * path.T, dtype="Int64")
    return pd.DataFrame({
        "t": np.arange(1, path.T + 1),
        "y": path.y,
        "sigma_true": path.sigma_true,
        "regime": regime,
    })


def write_path(path: SimPath, file: Union[str, Path]) -> str:
    """CSV with columns t, y, sigma_true, regime (blank when the DGP has none); returns sha256."""
    return write_csv(path_frame(path), file)


def read_path(file: Union[str, Path]) -> SimPath:
    try:
        frame = pd.read_csv(file)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SeriesFormatError(f"unreadable path CSV ({e})", path=str(file)) from e

    missing = [c for c in ("y", "sigma_true") if c not in frame.columns]
    if missing:
        raise SeriesFormatError(f"missing columns {missing}", path=str(file))

    regime = None
    if "regime" in frame.columns and frame["regime"].notna().all():
        regime = frame["regime"].to_numpy(dtype=np.int64)
    return SimPath(
        y=frame["y"].to_numpy(dtype=float),
        sigma_true=frame["sigma_true"].to_numpy(dtype=float),
        regime=regime,
    )
