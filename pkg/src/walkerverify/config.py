"""
Configuration management for walkerverify.

Settings are pydantic models; the top-level settings class reads environment
variables with the ``WALKER_VERIFY_`` prefix, an optional ``.env`` file, and
JSON or YAML configuration files.
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# ASCII bytes of "WALK".
DEFAULT_SEED = 0x57414C4B

DEFAULT_SAMPLES = 1000
DEFAULT_ZERO_TOL = 1e-8
DIVISION_GUARD = 1e-12


class SamplingConfig(BaseModel):
    """Configuration for seeded point sampling."""

    samples: int = Field(
        default=DEFAULT_SAMPLES,
        ge=1,
        description="Number of sampled points per check"
    )
    seed: int = Field(
        default=DEFAULT_SEED,
        ge=0,
        description="Seed of the per-point random streams"
    )
    retry_cap: int = Field(
        default=50,
        ge=1,
        le=10000,
        description="Resampling attempts per point before giving up"
    )


class ToleranceConfig(BaseModel):
    """Scale-relative tolerances used by the residual suites."""

    zero: float = Field(default=DEFAULT_ZERO_TOL, gt=0, description="Sampled zero test")
    einstein: float = Field(default=1e-7, gt=0, description="Einstein residual")
    symmetry: float = Field(default=1e-9, gt=0, description="Curvature symmetries")
    identity: float = Field(default=1e-8, gt=0, description="Frame identities")
    killing: float = Field(default=1e-9, gt=0, description="Killing residual")
    det_t: float = Field(default=1e-8, gt=0, description="det T degeneracy threshold")
    division_guard: float = Field(default=DIVISION_GUARD, gt=0, description="Smallest admissible divisor")
    singular: float = Field(
        default=1e-10, gt=0, description="Smallest admissible |det g| relative to the product of row norms"
    )
    condition_warning: float = Field(default=1e12, gt=1, description="Condition number warning level")


class IntegratorConfig(BaseModel):
    """Configuration for the flow integrator."""

    method: Literal["DOP853", "RK45"] = Field(
        default="DOP853",
        description="Embedded Dormand-Prince pair used by solve_ivp"
    )
    rtol: float = Field(default=1e-10, gt=0, description="Relative local tolerance")
    atol: float = Field(default=1e-10, gt=0, description="Absolute local tolerance")
    max_step: Optional[float] = Field(default=None, gt=0, description="Largest step in u")


class LoggingConfig(BaseModel):
    """Configuration for logging."""

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="WARNING",
        description="Logging level"
    )
    format: str = Field(
        default="%(message)s",
        description="Log format string"
    )
    file_path: Optional[Path] = Field(
        default=None,
        description="Path to log file (if None, logs to console only)"
    )
    max_file_size: int = Field(
        default=10 * 1024 * 1024,  # 10MB
        ge=1024,
        description="Maximum log file size in bytes"
    )
    backup_count: int = Field(
        default=5,
        ge=1,
        le=20,
        description="Number of backup log files to keep"
    )


class WalkerVerifyConfig(BaseSettings):
    """Main settings of the toolkit."""

    model_config = SettingsConfigDict(
        env_prefix="WALKER_VERIFY_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    sampling: SamplingConfig = Field(
        default_factory=SamplingConfig,
        description="Sampling configuration"
    )
    tolerance: ToleranceConfig = Field(
        default_factory=ToleranceConfig,
        description="Tolerance configuration"
    )
    integrator: IntegratorConfig = Field(
        default_factory=IntegratorConfig,
        description="Flow integrator configuration"
    )
    logging: LoggingConfig = Field(
        default_factory=LoggingConfig,
        description="Logging configuration"
    )
    threads: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Maximum worker threads for batch evaluation"
    )

    @field_validator("threads", mode="before")
    @classmethod
    def validate_threads(cls, v: Any) -> Any:
        """Treat an empty variable as the serial default."""
        if v in ("", None):
            return 1
        return v

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return self.model_dump(mode="json")

    @classmethod
    def from_file(cls, config_path: Path) -> "WalkerVerifyConfig":
        """Load configuration from a JSON or YAML file."""
        if config_path.suffix.lower() == ".json":
            import json
            with open(config_path, encoding="utf-8") as f:
                config_data = json.load(f)
        elif config_path.suffix.lower() in [".yaml", ".yml"]:
            import yaml
            with open(config_path, encoding="utf-8") as f:
                config_data = yaml.safe_load(f) or {}
        else:
            raise ValueError(f"Unsupported config file format: {config_path.suffix}")

        return cls(**config_data)


@lru_cache(maxsize=1)
def get_config() -> WalkerVerifyConfig:
    """Return the process-wide settings, read once from the environment."""
    return WalkerVerifyConfig()
