"""
Application configuration management
"""

from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings

FIELD_TAGS = ("Q", "Qi", "Qlambda", "Qilambda")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """Application settings"""

    # Application
    APP_NAME: str = "ddbar"
    VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_DIR: str = "logs"
    LOG_TO_FILE: bool = False

    # Computation
    DEFAULT_FIELD: str = "Qilambda"
    DEFAULT_TRUNCATION: int = 6
    DEFAULT_FORMAT: str = "text"
    QISO_METHOD: str = "full"
    FREENESS_DEGREE: int = 20

    # Fixtures
    FIXTURES_DIR: Optional[str] = None
    MAX_WORKERS: int = 4

    # Randomized suites
    RANDOM_SEED: int = 20240229
    RANDOM_TRIALS: int = 200
    SOLVER_TRIALS: int = 100

    # Reports
    REPORT_SCHEMA_VERSION: str = "1.0"

    @field_validator("LOG_LEVEL")
    def validate_log_level(cls, v):
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")
        return v

    @field_validator("DEFAULT_FIELD")
    def validate_field(cls, v):
        if v not in FIELD_TAGS:
            raise ValueError(f"DEFAULT_FIELD must be one of {', '.join(FIELD_TAGS)}")
        return v

    @field_validator("DEFAULT_FORMAT")
    def validate_format(cls, v):
        if v not in ("text", "json"):
            raise ValueError("DEFAULT_FORMAT must be 'text' or 'json'")
        return v

    @field_validator("QISO_METHOD")
    def validate_qiso_method(cls, v):
        if v not in ("full", "auto"):
            raise ValueError("QISO_METHOD must be 'full' or 'auto'")
        return v

    @field_validator("DEFAULT_TRUNCATION", "MAX_WORKERS", "FREENESS_DEGREE")
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v

    class Config:
        env_prefix = "DDBAR_"
        env_file = ".env"
        env_file_encoding = "utf-8"


# Global settings instance
settings = Settings()
