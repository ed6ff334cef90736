"""Runtime settings loaded from the environment (and an optional .env file)."""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 10**7
DEFAULT_CLI_MAX_ORDER = 10**6
DEFAULT_TIME_LIMIT = 60.0
DEFAULT_WORKERS = 1


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", name, raw)
        return default
    if value < 1:
        logger.warning("Ignoring %s=%r: must be positive", name, raw)
        return default
    return value


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not a number", name, raw)
        return default
    if value <= 0:
        logger.warning("Ignoring %s=%r: must be positive", name, raw)
        return default
    return value


class Settings:
    """Ceilings and worker counts used by the library and the command line.

    Attributes:
        max_order: Enumeration ceiling for library calls.
        cli_max_order: Default for the CLI's --max-order flag.
        time_limit: Default for the CLI's --time-limit flag, in seconds.
        workers: Default for the CLI's --workers flag.
    """

    def __init__(
        self,
        max_order: int = DEFAULT_MAX_ORDER,
        cli_max_order: int = DEFAULT_CLI_MAX_ORDER,
        time_limit: float = DEFAULT_TIME_LIMIT,
        workers: int = DEFAULT_WORKERS,
    ) -> None:
        self.max_order: int = max_order
        self.cli_max_order: int = cli_max_order
        self.time_limit: float = time_limit
        self.workers: int = workers

    def __repr__(self) -> str:
        return (
            f"Settings(max_order={self.max_order}, cli_max_order={self.cli_max_order}, "
            f"time_limit={self.time_limit}, workers={self.workers})"
        )


def load_settings() -> Settings:
    """Build a Settings object from FLAGMAJOR_* environment variables.

    Values that do not parse fall back to their defaults with a warning.

    Returns:
        The resolved settings.
    """
    return Settings(
        max_order=_read_int("FLAGMAJOR_MAX_ORDER", DEFAULT_MAX_ORDER),
        cli_max_order=_read_int("FLAGMAJOR_CLI_MAX_ORDER", DEFAULT_CLI_MAX_ORDER),
        time_limit=_read_float("FLAGMAJOR_TIME_LIMIT", DEFAULT_TIME_LIMIT),
        workers=_read_int("FLAGMAJOR_WORKERS", DEFAULT_WORKERS),
    )


_SETTINGS: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the process-wide settings, loading them on first use."""
    global _SETTINGS
    if _SETTINGS is None:
        _SETTINGS = load_settings()
    return _SETTINGS


def default_max_order() -> int:
    """Ceiling applied when a caller does not pass one explicitly."""
    return get_settings().max_order
