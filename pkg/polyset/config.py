from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="POLYSET_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    # Solver checks
    check_certificates: bool = Field(
        default=False,
        description="Verify every LP certificate and raise CertificateError on failure.",
    )
    certify_minimizers: bool = Field(
        default=False,
        description="Re-solve LP(F,w,x) for every final outer normal of each returned minimizer.",
    )
    max_minimizer_iterations: int = Field(
        default=10_000,
        ge=1,
        description="Safety cap on the update loops of the minimizer computation.",
    )

    # Execution
    jobs: int = Field(default=1, ge=1, description="Worker processes for minimizer calls.")

    # Output
    decimal_places: int = Field(default=4, ge=0, le=30)


@lru_cache
def get_settings() -> Settings:
    return Settings()
