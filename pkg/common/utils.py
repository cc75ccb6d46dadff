import logging
import os
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(name: str, level: Optional[str] = None):
    """Configures a standardized logger."""
    logger = logging.getLogger(name)
    level_name = (level or os.getenv("BOGODIAG_LOG_LEVEL", "INFO")).upper()
    logger.setLevel(getattr(logging, level_name, logging.INFO))
    handler = logging.StreamHandler()
    formatter = logging.Formatter(LOG_FORMAT)
    handler.setFormatter(formatter)
    if not logger.handlers:
        logger.addHandler(handler)
    return logger


def parse_positive_int(value: Optional[str], default: int) -> int:
    """Parses an env-style integer, falling back to `default` on junk or non-positive input."""
    if value is None or value == "":
        return default
    try:
        parsed = int(value)
    except ValueError:
        return default
    return parsed if parsed > 0 else default
