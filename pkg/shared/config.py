"""Configuration management using Pydantic settings."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class GroebnerConfig(BaseModel):
    """Groebner engine configuration."""

    s_pair_budget: int = Field(
        default=200_000,
        gt=0,
        description="Maximum number of S-pair reductions per basis computation",
    )
    term_order: Literal["grevlex", "lex"] = Field(
        default="grevlex", description="Default monomial order"
    )


class SamplingConfig(BaseModel):
    """Sampling of rational points."""

    seed: int = Field(default=0, description="Seed for sampled points")
    random_points: int = Field(
        default=3,
        ge=1,
        description="Random points used to estimate generic ranks",
    )


class HermitianConfig(BaseModel):
    """Complexification options."""

    cone_shortcut: bool = Field(
        default=True,
        description="Read the intrinsic complexification of certified cones "
        "off their holomorphic generators instead of eliminating",
    )


class LeviflatConfig(BaseSettings):
    """Application configuration."""

    model_config = SettingsConfigDict(
        env_prefix="LEVIFLAT_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = Field(default="leviflat", description="Application name")
    version: str = Field(default="0.1.0", description="Application version")

    # Paths
    logs_dir: Path = Field(default=Path("./logs"), description="Logs directory")

    # Logging
    log_level: str = Field(default="WARNING", description="Log level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format",
    )
    log_to_file: bool = Field(default=False, description="Write logs to logs_dir")

    groebner: GroebnerConfig = Field(default_factory=GroebnerConfig)
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    hermitian: HermitianConfig = Field(default_factory=HermitianConfig)

    @property
    def log_file(self) -> Optional[Path]:
        if not self.log_to_file:
            return None
        return self.logs_dir / f"{self.app_name}.log"


# Global configuration instance
config: Optional[LeviflatConfig] = None


def get_config() -> LeviflatConfig:
    """Get the global configuration instance."""
    global config
    if config is None:
        config = LeviflatConfig()
    return config


def init_config(**kwargs) -> LeviflatConfig:
    """Initialize the global configuration."""
    global config
    config = LeviflatConfig(**kwargs)
    return config
