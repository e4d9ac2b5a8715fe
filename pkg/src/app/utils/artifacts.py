from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from src.app.schemas.model import RunManifest
from src.app.utils.logger import get_logger

logger = get_logger("app.artifacts")

# 17 significant digits round-trip every float64
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_csv(frame: pd.DataFrame, path: PathLike) -> str:
    """Write with full float precision and LF line endings; returns the file's sha256."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return sha256_file(path)


def write_json(payload: dict, path: PathLike) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return sha256_file(path)


def hash_artifacts(out_dir: PathLike, names) -> Dict[str, str]:
    out_dir = Path(out_dir)
    return {name: sha256_file(out_dir / name) for name in names}


def write_manifest(manifest: RunManifest, out_dir: PathLike) -> Path:
    path = Path(out_dir) / "manifest.json"
    write_json(manifest.model_dump(mode="json"), path)
    logger.info("manifest written path=%s artifacts=%d", path, len(manifest.artifacts))
    return path


def read_manifest(path: PathLike) -> RunManifest:
    return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
