from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=None,
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Application
    APP_NAME: str = Field(default="adaptive_sv")
    APP_ENV: str = Field(default="dev")
    APP_VERSION: str = Field(default="0.1.0")
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FILE: str = Field(default="")

    # Chain defaults
    N_BURN: int = Field(default=20000)
    N_DRAW: int = Field(default=5000)
    THIN: int = Field(default=1)
    OFFSET_C: float = Field(default=1e-8)

    # Sampler options
    PHI_PRIOR: str = Field(default="beta_10_2")
    MU_UPDATE: str = Field(default="exact")
    PHI_LIKELIHOOD: str = Field(default="exact")
    SLICE_WIDTH: float = Field(default=0.25)
    SLICE_MAX_STEPS: int = Field(default=1000)
    PG_TRUNCATION: int = Field(default=200)
    OMORI_PATH: str = Field(default="")

    # Runs
    JOBS: int = Field(default=1)
    PROGRESS: bool = Field(default=False)
    CHAIN_TRACE_LOGS: bool = Field(default=False)
    API_MAX_ITERATIONS: int = Field(default=20000)


@lru_cache()
def get_settings() -> Settings:
    return Settings()


def load_settings(config_path: Optional[str] = None) -> Settings:
    """Settings from the environment plus an explicit dotenv file, if given."""
    if not config_path:
        return get_settings()
    return Settings(_env_file=config_path)
