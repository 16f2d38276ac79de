"""Configuration management for the parabolic geometry engine."""

from pydantic_settings import BaseSettings
from pydantic import validator


class Settings(BaseSettings):
    """Application settings."""

    # Logging Configuration
    log_level: str = "INFO"
    debug: bool = False
    log_json: bool = True

    # Prolongation Configuration
    threshold_margin: int = 2
    max_level_unknowns: int = 1200

    # Batch Configuration
    default_jobs: int = 1

    # File Configuration
    data_dir: str = "./data"
    output_dir: str = "./reports"
    verify_fixture_checksums: bool = True

    @validator('log_level')
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f'Unknown log level: {v}')
        return level

    @validator('threshold_margin', 'max_level_unknowns', 'default_jobs')
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('Value must be positive')
        return v

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


# Global settings instance
settings = Settings()
