"""
Configuration Management
Load lab-wide settings from YAML and REULAB_* environment variables
"""

import math
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml
from loguru import logger
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_YAML = Path(__file__).with_name("settings.yaml")


class LoggingSettings(BaseSettings):
    """Console and file logging"""
    model_config = SettingsConfigDict(env_prefix="REULAB_LOG_", extra="forbid")

    level: str = "INFO"
    format: str = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}"
    file: Optional[str] = None
    run_log_level: str = "DEBUG"

    @field_validator("level", "run_log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()


class RuntimeSettings(BaseSettings):
    """Process-level knobs"""
    model_config = SettingsConfigDict(env_prefix="REULAB_RUNTIME_", extra="forbid")

    threads: int = Field(default=1, ge=1)
    output_root: str = "runs"
    float_format: str = "%.17g"
    progress: bool = True


class SolverDefaults(BaseSettings):
    """Defaults for solver keys a scenario leaves out"""
    model_config = SettingsConfigDict(env_prefix="REULAB_SOLVER_", extra="forbid")

    cfl_max: float = Field(default=0.5, gt=0.0)
    dealias: bool = True
    bkm_ceiling: Optional[float] = Field(default=None, gt=0.0)
    snapshot_stride: int = Field(default=0, ge=0)
    besov_stride: int = Field(default=1, ge=0)


class VerifyDefaults(BaseSettings):
    """Lemma verifier suite"""
    model_config = SettingsConfigDict(env_prefix="REULAB_VERIFY_", extra="forbid")

    n: int = 32
    ensemble_size: int = Field(default=100, ge=1)
    seeds: List[int] = [0, 1]
    nu: float = Field(default=1.0, gt=0.0)
    include_variant_ii: bool = False


class StrichartzDefaults(BaseSettings):
    """Decay harness"""
    model_config = SettingsConfigDict(env_prefix="REULAB_STRICHARTZ_", extra="forbid")

    n: int = 64
    j: int = 3
    r: float = 4.0
    t_end: float = Field(default=2.0, gt=0.0)
    omegas: List[float] = [10.0, 30.0, 100.0, 300.0, 1000.0]

    @field_validator("r")
    @classmethod
    def _admissible(cls, value: float) -> float:
        if not (2.0 < value < math.inf):
            raise ValueError(f"r must satisfy 2 < r < inf, got {value}")
        return value


class LabSettings(BaseSettings):
    """Main lab settings"""
    model_config = SettingsConfigDict(
        env_prefix="REULAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "reulab"
    app_version: str = "0.1.0"

    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    runtime: RuntimeSettings = Field(default_factory=RuntimeSettings)
    solver_defaults: SolverDefaults = Field(default_factory=SolverDefaults)
    verify_defaults: VerifyDefaults = Field(default_factory=VerifyDefaults)
    strichartz_defaults: StrichartzDefaults = Field(default_factory=StrichartzDefaults)

    @classmethod
    def load_from_yaml(cls, yaml_path: Union[str, Path] = DEFAULT_YAML) -> "LabSettings":
        """Load settings from a YAML file; defaults when the file is missing"""
        config_path = Path(yaml_path)
        if not config_path.exists():
            return cls()

        with open(config_path, "r") as f:
            yaml_config: Dict = yaml.safe_load(f) or {}

        return cls(**yaml_config)


@lru_cache()
def get_settings() -> LabSettings:
    """Get cached settings instance"""
    try:
        return LabSettings.load_from_yaml()
    except Exception as exc:
        logger.warning(f"⚠️ settings file unusable ({exc}), falling back to defaults")
        return LabSettings()
