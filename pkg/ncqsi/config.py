# standard imports
import os
import sys
from functools import lru_cache
from pathlib import Path
from typing import Optional

# third party imports
from loguru import logger
from pydantic import BaseModel, Field, ValidationError, field_validator


class Tolerances(BaseModel):
    """Numerical tolerances shared by the math core, the suites and the CLI."""

    model_config = {"extra": "forbid", "frozen": True}

    tol_eq: float = Field(default=1e-10, gt=0)
    tol_psd: float = Field(default=1e-10, gt=0)
    tol_identity: float = Field(default=1e-12, gt=0)
    tol_conv: float = Field(default=1e-9, gt=0)
    suite_tol_conv: float = Field(default=1e-6, gt=0)
    max_depth: int = Field(default=24, ge=0, le=40)


class Settings(BaseModel):
    """Runtime settings read from NCQSI_* environment variables."""

    model_config = {"frozen": True}

    threads: int = 1
    log_level: str = "INFO"
    log_file: Optional[Path] = None

    @field_validator("threads")
    @classmethod
    def _at_least_one_thread(cls, value: int) -> int:
        return max(1, value)

    @classmethod
    def from_env(cls) -> "Settings":
        raw = {
            "threads": os.environ.get("NCQSI_THREADS", "1"),
            "log_level": os.environ.get("NCQSI_LOG_LEVEL", "INFO").upper(),
            "log_file": os.environ.get("NCQSI_LOG_FILE") or None,
        }
        try:
            return cls.model_validate(raw)
        except ValidationError as e:
            logger.warning(f"Settings.from_env: ignoring invalid environment: {e}")
            return cls()


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def configure_logger(
    level: str = "INFO",
    log_to_file: bool = False,
    output_directory: Optional[Path] = None,
    log_filename: str = "ncqsi.log",
) -> None:
    """Replace loguru's default sink with a stderr sink and an optional file sink."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}",
    )

    if log_to_file:
        directory = output_directory or Path.cwd()
        directory.mkdir(parents=True, exist_ok=True)
        logger.add(
            directory / log_filename,
            level="DEBUG",
            rotation="10 MB",
            retention=3,
        )
