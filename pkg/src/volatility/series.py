from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.volatility.errors import SeriesFormatError

MIN_LENGTH = 8
_VALUE_COLUMNS = ("y", "value", "values", "return", "returns")


@dataclass(frozen=True)
class TimeSeries:
    values: np.ndarray
    labels: Optional[List[str]] = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise SeriesFormatError(f"series must be one-dimensional, got shape {values.shape}")
        if values.size < MIN_LENGTH:
            raise SeriesFormatError(f"series needs at least {MIN_LENGTH} observations, got {values.size}")
        if not np.all(np.isfinite(values)):
            bad = int(np.argmax(~np.isfinite(values)))
            raise SeriesFormatError(f"non-finite value at index {bad}")
        if self.labels is not None and len(self.labels) != values.size:
            raise SeriesFormatError(f"{len(self.labels)} labels for {values.size} values")
        object.__setattr__(self, "values", values)

    @property
    def T(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_values(cls, values: Sequence[float], labels: Optional[Sequence[str]] = None) -> "TimeSeries":
        return cls(np.asarray(values, dtype=float), list(map(str, labels)) if labels is not None else None)

    def centered(self, how: str = "none") -> "TimeSeries":
        if how == "none":
            return self
        if how == "mean":
            return TimeSeries(self.values - self.values.mean(), self.labels)
        raise ValueError(f"Unknown centering: {how}")

    def label_column(self) -> List[str]:
        return self.labels if self.labels is not None else [""] * self.T


def _pick_value_column(frame: pd.DataFrame) -> str:
    lowered = {str(c).strip().lower(): c for c in frame.columns}
    for name in _VALUE_COLUMNS:
        if name in lowered:
            return lowered[name]

    numeric = [c for c in frame.columns if pd.api.types.is_numeric_dtype(frame[c])]
    if not numeric:
        raise SeriesFormatError("no numeric value column")
    return numeric[-1]


def read_series_csv(path: str | Path) -> TimeSeries:
    """
    Read a headed CSV with one numeric value column and an optional label column.

    The value column is `y`/`value` when present, otherwise the last numeric column; any other
    single column is taken as labels.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise SeriesFormatError(f"unreadable CSV ({e})", path=str(path)) from e

    if frame.shape[1] == 0 or frame.empty:
        raise SeriesFormatError("empty CSV", path=str(path))
    if frame.shape[1] > 2:
        raise SeriesFormatError(f"expected one value column and at most one label column, got {frame.shape[1]} columns", path=str(path))

    try:
        value_col = _pick_value_column(frame)
        values = pd.to_numeric(frame[value_col], errors="raise").to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise SeriesFormatError(f"value column is not numeric ({e})", path=str(path)) from e

    others = [c for c in frame.columns if c != value_col]
    labels = frame[others[0]].astype(str).tolist() if others else None

    try:
        return TimeSeries(values, labels)
    except SeriesFormatError as e:
        raise SeriesFormatError(e.reason, path=str(path)) from e
