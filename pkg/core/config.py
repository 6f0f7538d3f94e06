"""Application configuration settings."""

import os
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    APP_NAME: str = "Braid Dilatation Bounds"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Parallelism (None means implementation default)
    BDL_THREADS: Optional[int] = None

    # Resource guards
    TERM_CAP: int = 10_000_000
    TORUS_POINT_CAP: int = 10_000_000

    # Torus scan defaults
    TORUS_GRID: int = 256
    TORUS_REFINE: int = 3

    # Growth defaults
    KMAX: int = 10

    # Tolerances
    MODULUS_TOL: float = 1e-12
    MODULUS_WARN_TOL: float = 1e-6
    SHARPNESS_TOL: float = 1e-6

    # Report output
    REPORT_SIG_DIGITS: int = 10
    SCHEMA_VERSION: int = 1

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    def worker_count(self) -> int:
        """Number of worker threads for parallel stages."""
        if self.BDL_THREADS is not None and self.BDL_THREADS > 0:
            return self.BDL_THREADS
        return min(4, os.cpu_count() or 1)


settings = Settings()


def get_settings() -> Settings:
    """Get the settings singleton."""
    return settings
