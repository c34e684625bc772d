"""Environment variable management for singularity-chains"""

import os
import logging
from typing import Optional

from dotenv import find_dotenv, load_dotenv

from ..configs.defaults import CHAIN_ATOL, CHAIN_RTOL

logger = logging.getLogger(__name__)

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def load_environment() -> None:
    """Load a .env file from the working directory; existing variables win."""
    if load_dotenv(find_dotenv(usecwd=True), override=False):
        logger.debug("[Environment] Loaded variables from .env")


def get_log_level_name() -> str:
    """Get the log level name from SINGCHAIN_LOG, with default of info."""
    value = os.getenv("SINGCHAIN_LOG", "info").lower().strip()
    if value not in LOG_LEVELS:
        logger.warning(f"[Log Level] Unknown SINGCHAIN_LOG value '{value}', using 'info'")
        return "info"
    return value


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging once for the command-line entry point.

    Args:
        level: Explicit level name; defaults to SINGCHAIN_LOG
    """
    name = (level or get_log_level_name()).lower()
    logging.basicConfig(
        level=LOG_LEVELS.get(name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _get_positive_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"[Environment] Ignoring {name}='{raw}': not a number")
        return default
    if not value > 0:
        logger.warning(f"[Environment] Ignoring {name}='{raw}': must be positive")
        return default
    return value


def get_rtol() -> float:
    """Get the relative integrator tolerance from SINGCHAIN_RTOL."""
    return _get_positive_float("SINGCHAIN_RTOL", CHAIN_RTOL)


def get_atol() -> float:
    """Get the absolute integrator tolerance from SINGCHAIN_ATOL."""
    return _get_positive_float("SINGCHAIN_ATOL", CHAIN_ATOL)


def get_workers() -> int:
    """Get the default number of concurrent fit restarts from SINGCHAIN_WORKERS."""
    raw = os.getenv("SINGCHAIN_WORKERS", "1").strip()
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"[Environment] Ignoring SINGCHAIN_WORKERS='{raw}': not an integer")
        return 1
    if value < 1:
        logger.warning(f"[Environment] Ignoring SINGCHAIN_WORKERS='{raw}': must be at least 1")
        return 1
    return value
