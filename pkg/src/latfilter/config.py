"""Configuration management for latfilter."""

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="LATFILTER_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Logging Configuration
    log_level: str = "WARNING"
    log_dir: str | None = None  # None = console only

    # Linear Solver Configuration
    pcg_tolerance: float = 1e-6
    pcg_max_iter_factor: int = 10  # max iterations = factor * unknowns
    dense_max_unknowns: int = 10_000

    # Image I/O Configuration
    color_mode: Literal["luma", "channels"] = "luma"
    json_indent: int | None = None

    def validate_solver_config(self) -> None:
        """Validate that the solver settings describe a usable iteration."""
        if self.pcg_tolerance <= 0:
            raise ValueError("LATFILTER_PCG_TOLERANCE must be positive")
        if self.pcg_max_iter_factor < 1:
            raise ValueError("LATFILTER_PCG_MAX_ITER_FACTOR must be at least 1")
        if self.dense_max_unknowns < 1:
            raise ValueError("LATFILTER_DENSE_MAX_UNKNOWNS must be at least 1")


# Global settings instance
settings = Settings()
