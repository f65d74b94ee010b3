"""
Configuration management for treecrit.
Numerical tolerances, simulation budgets and logging options, read from
TREECRIT_* environment variables or a local .env file.
"""

from functools import lru_cache
from typing import Optional

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with validation."""

    # Application
    APP_NAME: str = "treecrit"
    APP_VERSION: str = "1.0.0"

    # API
    API_V1_PREFIX: str = "/api/v1"
    API_TITLE: str = "treecrit API"
    API_DESCRIPTION: str = "Spectral criticality of random environments on coloured trees"
    HOST: str = Field(default="127.0.0.1")
    PORT: int = Field(default=8000, ge=1, le=65535)

    # Logging
    LOG_LEVEL: str = Field(default="INFO", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    LOG_FORMAT: str = Field(default="console", pattern="^(json|console)$")
    LOG_FILE: Optional[str] = Field(default=None)
    LOG_MAX_SIZE_MB: int = Field(default=20, ge=1)
    LOG_BACKUP_COUNT: int = Field(default=3, ge=1)

    # Parallelism
    THREADS: int = Field(default=1, ge=1, le=256)

    # Moments and quadrature
    QUAD_REL_TOL: float = Field(default=1e-10, gt=0, lt=1e-3)
    QUAD_MAX_SUBDIVISIONS: int = Field(default=65536, ge=50)
    PROBABILITY_SUM_TOL: float = Field(default=1e-12, gt=0, lt=1e-3)

    # Spectral
    S_MAX_BOUND: float = Field(default=64.0, gt=1.0)
    PERRON_TOL: float = Field(default=1e-12, gt=0)
    PERRON_MAX_ITER: int = Field(default=100_000, ge=10)
    PERRON_RESIDUAL_TOL: float = Field(default=1e-10, gt=0)
    GOLDEN_TOL: float = Field(default=1e-8, gt=0)
    FD_STEP: float = Field(default=1e-5, gt=0, lt=1e-1)
    DEGENERACY_THRESHOLD: float = Field(default=1e-9, gt=0)
    SPEED_SEARCH_LO: float = Field(default=-1e3)
    SPEED_SEARCH_HI: float = Field(default=1e3)
    SPEED_TOL: float = Field(default=1e-8, gt=0)

    # Classification
    EPS_CRITICAL: float = Field(default=1e-4, ge=0, lt=1)
    BISECTION_TOL: float = Field(default=1e-4, gt=0)

    # Simulation budgets
    MAX_TREE_VERTICES: int = Field(default=10_000_000, ge=1000)
    MAX_FRONTIER: int = Field(default=1_000_000, ge=1000)
    MAX_WALK_STEPS: int = Field(default=100_000_000, ge=1000)
    PRUNE_WINDOW: float = Field(default=30.0, gt=0)
    BRW_FRONTIER_CAP: int = Field(default=65536, ge=16)
    RDE_DIVERGENCE_MEDIAN: float = Field(default=1e15, gt=1)
    STABILIZATION_LEVELS: int = Field(default=4, ge=1)
    EMBEDDED_POPULATION_CAP: int = Field(default=64, ge=1)
    MEMORY_WARNING_MB: float = Field(default=2048.0, gt=0)

    model_config = SettingsConfigDict(
        env_prefix="TREECRIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: object) -> object:
        """Accept lower-case level names."""
        if isinstance(v, str):
            return v.upper()
        return v

    @model_validator(mode="after")
    def check_speed_interval(self) -> "Settings":
        if self.SPEED_SEARCH_LO >= self.SPEED_SEARCH_HI:
            raise ValueError("SPEED_SEARCH_LO must be below SPEED_SEARCH_HI")
        return self


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
