"""
Application Configuration

Load settings from environment variables using Pydantic Settings.
"""

import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library and CLI settings loaded from GRAPHMETRIC_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="GRAPHMETRIC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "graphmetric"
    debug: bool = False
    log_level: str = "INFO"

    # Parallelism (0 = auto)
    threads: int = Field(default=0, ge=0)
    pair_block: int = Field(default=1024, ge=1)

    # Experiments
    default_pairs: int = Field(default=100_000, ge=1)
    default_bins: int = Field(default=64, ge=1)
    exhaustive_limit: int = 2**24

    # Graphon estimator
    graphon_floor: float = Field(default=1e-6, gt=0, le=1)
    graphon_inner_samples: int = Field(default=256, ge=1)
    graphon_outer_samples: int = Field(default=1024, ge=1)
    saturation_clamp: float = Field(default=1e-12, gt=0, lt=1)

    # Numerical tolerances
    identity_tol: float = 1e-12
    roundtrip_tol: float = 1e-10

    @property
    def resolved_threads(self) -> int:
        """Worker count after resolving 0 to the machine's CPU count."""
        return self.threads or (os.cpu_count() or 1)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
