# --- core/log.py ---
from __future__ import annotations
import logging
import sys

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """
    Install the package log format on stderr.

    Output files never carry log records, so CSV bodies stay deterministic.

    :param level: Logging level name, e.g. "INFO" or "DEBUG".
    :raises ValueError: If the level name is unknown.
    """
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT, stream=sys.stderr, force=True)
