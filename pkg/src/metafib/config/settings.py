"""Configuration and environment settings for metafib."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from metafib.models.types import TransitionParams


class CacheSettings(BaseSettings):
    """Sequence table cache settings."""

    model_config = SettingsConfigDict(extra="forbid")

    dir: Path = Path("./.metafib-cache")

    @field_validator("dir")
    @classmethod
    def _dir_to_absolute(cls, value: Path) -> Path:
        """Resolve the cache directory to an absolute path."""
        return value.expanduser().resolve()


class LoggingSettings(BaseSettings):
    """Logging configuration settings."""

    model_config = SettingsConfigDict(extra="forbid")

    level: Annotated[str, Field(min_length=1)] = "WARNING"
    json_logs: bool = False


class HorizonSettings(BaseSettings):
    """Default horizons of the verification suites."""

    model_config = SettingsConfigDict(extra="forbid")

    conolly_exponent: Annotated[int, Field(ge=2, le=30)] = 20
    conway_exponent: Annotated[int, Field(ge=1, le=30)] = 20
    e_limit: Annotated[int, Field(ge=10)] = 10**6
    mu: Annotated[int, Field(ge=50)] = (1 << 20) + 20
    theorems: Annotated[int, Field(ge=16)] = 1 << 18


class AppSettings(BaseSettings):
    """Top-level application settings."""

    model_config = SettingsConfigDict(
        env_prefix="METAFIB_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="forbid",
    )

    cache: CacheSettings = Field(default_factory=CacheSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    transitions: TransitionParams = Field(default_factory=TransitionParams)
    horizons: HorizonSettings = Field(default_factory=HorizonSettings)


def load_settings(*, env_file: Path | None) -> AppSettings:
    """Load validated settings from environment and optional file.

    Args:
        env_file: Optional .env file path.

    Returns:
        Validated AppSettings instance.
    """
    if env_file is None:
        return AppSettings()
    return AppSettings(_env_file=env_file)  # type: ignore[call-arg]
