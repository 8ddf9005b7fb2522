"""Logging utilities for the CIER pipeline.

Every module logs under the ``cier`` namespace; the CLI configures the
``cier`` logger once and all children inherit its handlers.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

ROOT_LOGGER = "cier"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _handler(handler: logging.Handler, level: int) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    return handler


def setup_logger(name: str = ROOT_LOGGER, level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """Configure ``name`` with a stderr handler and an optional file handler.

    Calling it again replaces (and closes) the handlers from the previous call.

    Args:
        name: Logger name, normally ``cier`` or a child of it
        level: Logging level ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
        log_file: Optional file to log to; parent directories are created

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    for old in list(logger.handlers):
        logger.removeHandler(old)
        old.close()

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(numeric_level)
    logger.addHandler(_handler(logging.StreamHandler(sys.stderr), numeric_level))
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.addHandler(_handler(logging.FileHandler(log_file, encoding="utf-8"), numeric_level))

    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """Logger for ``name`` under the package namespace.

    ``get_logger(__name__)`` inside ``cier.*`` returns the module logger unchanged;
    bare names such as a class name are nested under ``cier``.
    """
    if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + "."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


class LoggerMixin:
    """Gives pipeline components a ``logger`` named after their class."""

    _logger: Optional[logging.Logger] = None

    @property
    def logger(self) -> logging.Logger:
        if self._logger is None:
            self._logger = get_logger(self.__class__.__name__)
        return self._logger
