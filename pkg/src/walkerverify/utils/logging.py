"""
Logging for walkerverify.

Everything logs below the ``walkerverify`` logger. Diagnostics go to stderr
through rich so that JSON and CSV reports on stdout stay parseable.
"""

import logging
import logging.handlers
from collections.abc import Mapping
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from ..config import LoggingConfig

ROOT_LOGGER = "walkerverify"

FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _console_handler(config: LoggingConfig) -> logging.Handler:
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        markup=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter(config.format))
    return handler


def _file_handler(path: Path, config: LoggingConfig) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        filename=path,
        maxBytes=config.max_file_size,
        backupCount=config.backup_count,
        encoding="utf-8",
    )
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


def setup_logging(config: Optional[LoggingConfig] = None, verbose: bool = False) -> logging.Logger:
    """
    Install the console handler and, if configured, a rotating log file.

    Calling it again replaces the handlers of an earlier call.

    Args:
        config: Logging configuration (defaults to ``LoggingConfig()``)
        verbose: Lower the level to INFO when the configured level is higher

    Returns:
        The package logger
    """
    config = config or LoggingConfig()
    level = getattr(logging, config.level)
    if verbose:
        level = min(level, logging.INFO)

    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    logger.handlers.clear()
    logger.addHandler(_console_handler(config))
    if config.file_path:
        logger.addHandler(_file_handler(Path(config.file_path), config))
    logger.propagate = False
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Child of the package logger; module names are used as given."""
    if name is None:
        return logging.getLogger(ROOT_LOGGER)
    if not name.startswith(ROOT_LOGGER):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def format_point(values: Mapping[str, float], digits: int = 6) -> str:
    """Compact ``v=0.3 x=0.9 ...`` form of a sample point for log lines."""
    return " ".join(f"{name}={float(value):.{digits}g}" for name, value in values.items())


__all__ = ["ROOT_LOGGER", "format_point", "get_logger", "setup_logging"]
