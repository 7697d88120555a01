import logging
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Operational settings managed through environment variables.

    Mathematical inputs never come from here; they are explicit CLI flags or
    request fields.
    """

    # Data
    examples_directory: str = "src/data/examples"

    # Runtime
    log_level: str = "INFO"
    max_workers: int = Field(1, ge=1)

    # Search bounds
    representative_scan_bound: int = Field(1_000_000, gt=0)
    class_group_generator_bound: int = Field(10_000, gt=0)

    # Rational reconstruction of A
    reconstruction_exponent: int = Field(3, ge=0)
    reconstruction_guard_digits: int = Field(10, ge=0)

    # Output
    default_digits: int = Field(10, ge=1)

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=False, extra="ignore"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        name = v.strip().upper()
        if not isinstance(logging.getLevelName(name), int):
            raise ValueError(f"unknown log level: {v}")
        return name


@lru_cache()
def get_settings() -> Settings:
    """
    Returns a cached instance of the settings.
    This avoids reading the environment every time the settings are accessed.
    """
    return Settings()
