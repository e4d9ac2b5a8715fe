from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.app.core.config import get_settings
from src.app.schemas.model import ModelSpec


def default_fit_spec() -> ModelSpec:
    """Settings-backed spec whose chain budget is scaled down to API_MAX_ITERATIONS, keeping the burn-in share."""
    settings = get_settings()
    limit = settings.API_MAX_ITERATIONS
    n_burn, n_draw = settings.N_BURN, settings.N_DRAW
    total = n_burn + n_draw
    if total > limit:
        n_draw = max(1, n_draw * limit // total)
        n_burn = limit - n_draw
    return ModelSpec(n_burn=n_burn, n_draw=n_draw)


class FitRequest(BaseModel):
    y: List[float] = Field(..., min_length=8)
    labels: Optional[List[str]] = None
    spec: ModelSpec = Field(default_factory=default_fit_spec)
    center: str = Field(default="none", pattern="^(none|mean)$")
    kappa_threshold: float = Field(default=0.9, gt=0, lt=1)


class PathSummary(BaseModel):
    t: List[int]
    mean: List[float]
    q05: List[float]
    q95: List[float]


class ScalarSummary(BaseModel):
    mean: float
    sd: float


class FitResponse(BaseModel):
    run_id: str
    variant: str
    n_keep: int
    h: PathSummary
    sigma: PathSummary
    kappa_mean: List[float]
    flags: List[int]  # 0-based indices with mean kappa below the threshold
    scalars: Dict[str, ScalarSummary]
    beta: Optional[PathSummary] = None
    wall_time_s: float


class SimulateRequest(BaseModel):
    dgp: int = Field(..., ge=1, le=8)
    T: int = Field(default=1000, ge=8, le=100_000)
    paths: int = Field(default=1, ge=1, le=100)
    seed: int = Field(default=0, ge=0)


class SimulatedPath(BaseModel):
    path: int
    y: List[float]
    sigma_true: List[float]
    regime: Optional[List[int]] = None


class SimulateResponse(BaseModel):
    dgp: int
    T: int
    seed: int
    paths: List[SimulatedPath]


class CheckRecord(BaseModel):
    name: str
    passed: bool
    detail: str


class TheoryResponse(BaseModel):
    check: str
    passed: bool
    results: List[CheckRecord]
