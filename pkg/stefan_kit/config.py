"""Configuration management for stefan-kit."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="STEFAN_KIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Root solver
    tol: float = Field(
        default=1e-12,
        description="Residual tolerance |g(x) - x| of the fixed-point solvers",
    )
    xtol: float = Field(
        default=1e-13,
        description="Bracket width at which the fixed-point solvers stop",
    )
    bracket_cap: float = Field(
        default=100.0,
        description="Upper limit for the bracket expansion of the fixed-point solvers",
    )

    # Verification thresholds
    roundtrip_tol: float = Field(
        default=1e-10,
        description="Maximum |lambda - xi| accepted by the equivalence round trip",
    )
    heat_order_min: float = Field(
        default=1.85,
        description="Minimum observed order of the central heat-equation residual",
    )
    stefan_order_min: float = Field(
        default=0.9,
        description="Minimum observed order of the one-sided Stefan residual",
    )
    robin_tol: float = Field(
        default=1e-8,
        description="Maximum relative residual of the convective face condition",
    )
    front_tol: float = Field(
        default=0.02,
        description="Maximum relative front error of the enthalpy march",
    )
    dimensionless_tol: float = Field(
        default=1e-10,
        description="Maximum relative gap between dimensional and dimensionless fields",
    )

    # Sweeps
    sweep_workers: int = Field(
        default=1,
        description="Number of threads used to evaluate sweep entries",
    )

    # Logging Configuration
    enable_logging: bool = Field(
        default=True,
        description="Enable structured logging",
    )
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR)",
    )
    log_dir: Path = Field(
        default=Path("logs"),
        description="Directory for log files",
    )
    enable_run_logging: bool = Field(
        default=True,
        description="Enable the JSON Lines audit trail of CLI runs",
    )
    log_max_bytes: int = Field(
        default=10_000_000,
        description="Maximum size of each log file before rotation (bytes)",
    )
    log_backup_count: int = Field(
        default=5,
        description="Number of backup log files to keep",
    )

    def validate_tolerances(self) -> None:
        """Validate that tolerances and thresholds are usable."""
        for name in ("tol", "xtol", "roundtrip_tol", "robin_tol", "front_tol", "dimensionless_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"STEFAN_KIT_{name.upper()} must be strictly positive")
        if not self.bracket_cap > 1.0:
            raise ValueError("STEFAN_KIT_BRACKET_CAP must be larger than the initial bracket (1)")
        if self.sweep_workers < 1:
            raise ValueError("STEFAN_KIT_SWEEP_WORKERS must be at least 1")


def load_settings() -> Settings:
    """Load and validate settings."""
    settings = Settings()
    settings.validate_tolerances()
    return settings
