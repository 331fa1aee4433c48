"""Environment driven settings and logging setup."""
import logging
import os
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

VERSION = "1.0.0"


def log_level() -> str:
    return os.getenv('LOG_LEVEL', 'INFO').upper()


def output_dir() -> Optional[Path]:
    """Directory for CLI output files, or None to write to stdout."""
    value = os.getenv('PDMKEPLER_OUTPUT_DIR')
    return Path(value) if value else None


def default_workers() -> int:
    try:
        return max(1, int(os.getenv('PDMKEPLER_WORKERS', '1')))
    except ValueError:
        return 1


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging once for an entry point.

    Inputs
    ------
    level : str
        Level name overriding ``LOG_LEVEL`` (default=None).
    """
    name = (level or log_level()).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.INFO),
        format=LOG_FORMAT,
    )
