"""
Configuration for admm-lab.
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from .exceptions import ConfigurationError


class Config:
    """Environment-level settings shared by the runner and the command line."""

    def __init__(
        self,
        output_dir: Optional[str] = None,
        workers: Optional[int] = None,
        log_level: Optional[str] = None,
        load_env_file: bool = True,
    ):
        """
        Initialize configuration.

        Args:
            output_dir: Directory for CSV and summary files (defaults to
                ADMM_LAB_OUTPUT_DIR env var, then ``./results``)
            workers: Size of the trial worker pool (defaults to
                ADMM_LAB_WORKERS env var, then the CPU count)
            log_level: Logging level name (defaults to ADMM_LAB_LOG_LEVEL
                env var, then ``WARNING``)
            load_env_file: Read a ``.env`` file from the working directory first
        """
        if load_env_file:
            load_dotenv(override=False)

        self.output_dir = output_dir or os.getenv('ADMM_LAB_OUTPUT_DIR', 'results')
        if workers is None:
            env_workers = os.getenv('ADMM_LAB_WORKERS')
            try:
                workers = int(env_workers) if env_workers else (os.cpu_count() or 1)
            except ValueError:
                raise ConfigurationError(
                    f"ADMM_LAB_WORKERS must be an integer, got {env_workers!r}",
                    key='workers',
                )
        self.workers = workers
        self.log_level = (log_level or os.getenv('ADMM_LAB_LOG_LEVEL', 'WARNING')).upper()

    def validate(self) -> None:
        """Validate the configuration."""
        if not self.output_dir:
            raise ConfigurationError("Output directory is required.", key='output_dir')

        if self.workers < 1:
            raise ConfigurationError("Workers must be at least 1.", key='workers')

    @property
    def output_path(self) -> Path:
        """Output directory as a Path."""
        return Path(self.output_dir)

    def __repr__(self) -> str:
        return (
            f"Config(output_dir='{self.output_dir}', workers={self.workers}, "
            f"log_level='{self.log_level}')"
        )
