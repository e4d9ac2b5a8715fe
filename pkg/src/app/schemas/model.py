from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.app.core.config import get_settings


class Variant(str, Enum):
    RWSV = "RWSV"
    RWSV_BL = "RWSV_BL"
    ASV_HS = "ASV_HS"
    ASV_DHS = "ASV_DHS"
    ASV_HS_N = "ASV_HS_N"
    ASV_DHS_N = "ASV_DHS_N"
    BTF_ASV = "BTF_ASV"

    @classmethod
    def parse(cls, name: str) -> "Variant":
        """Accept `asv_dhs`, `ASV-DHS` and `ASV_DHS` alike."""
        key = str(name).strip().upper().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"Unknown model variant: {name}. Supported: {[v.value for v in cls]}")

    @property
    def has_nugget(self) -> bool:
        return self in (Variant.ASV_HS_N, Variant.ASV_DHS_N)

    @property
    def uses_dsp(self) -> bool:
        return self not in (Variant.RWSV, Variant.RWSV_BL)

    @property
    def estimates_phi(self) -> bool:
        return self in (Variant.ASV_DHS, Variant.ASV_DHS_N, Variant.BTF_ASV)


PhiPrior = Literal["beta_10_2", "beta_half"]
UpdateRule = Literal["displayed", "exact"]

PHI_PRIORS: Dict[str, tuple] = {
    "beta_10_2": (10.0, 2.0),
    "beta_half": (0.5, 0.5),
}


def _setting(name: str):
    return lambda: getattr(get_settings(), name)


class ModelSpec(BaseModel):
    """Model variant, hyperparameters and chain budget for one fit."""

    variant: Variant = Variant.ASV_DHS
    k: int = Field(default=1, ge=1, le=3)
    k_beta: int = Field(default=2, ge=1, le=3)
    a: float = Field(default=0.5, gt=0)
    b: float = Field(default=0.5, gt=0)
    seed: int = Field(default=0, ge=0)
    n_burn: int = Field(default_factory=_setting("N_BURN"), ge=0)
    n_draw: int = Field(default_factory=_setting("N_DRAW"), ge=1)
    thin: int = Field(default_factory=_setting("THIN"), ge=1)
    offset_c: float = Field(default_factory=_setting("OFFSET_C"), gt=0)

    phi_prior: PhiPrior = Field(default_factory=_setting("PHI_PRIOR"))
    mu_update: UpdateRule = Field(default_factory=_setting("MU_UPDATE"))
    phi_likelihood: UpdateRule = Field(default_factory=_setting("PHI_LIKELIHOOD"))
    slice_width: float = Field(default_factory=_setting("SLICE_WIDTH"), gt=0)
    slice_max_steps: int = Field(default_factory=_setting("SLICE_MAX_STEPS"), ge=1)
    pg_truncation: int = Field(default_factory=_setting("PG_TRUNCATION"), ge=10)

    @field_validator("variant", mode="before")
    @classmethod
    def _parse_variant(cls, value):
        if isinstance(value, Variant):
            return value
        return Variant.parse(value)

    @model_validator(mode="after")
    def _check_pg_shape(self) -> "ModelSpec":
        shape = self.a + self.b
        if abs(shape - round(shape)) > 1e-12:
            raise ValueError(f"a + b must be a positive integer for Polya-Gamma augmentation, got {shape}")
        return self

    @property
    def estimate_phi(self) -> bool:
        return self.variant.estimates_phi

    @property
    def h_order(self) -> int:
        """Differencing order of the log-variance prior; the random-walk baselines are first order."""
        return self.k if self.variant.uses_dsp else 1

    @property
    def phi_prior_shapes(self) -> tuple:
        return PHI_PRIORS[self.phi_prior]

    @property
    def n_keep(self) -> int:
        return self.n_draw // self.thin


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI run and check its outputs."""

    command: List[str]
    spec: Optional[ModelSpec] = None
    seed: int
    wall_time_s: float
    artifacts: Dict[str, str] = Field(default_factory=dict)
    version: str
    extra: Dict[str, str] = Field(default_factory=dict)
