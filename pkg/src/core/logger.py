"""
Logging for pinvtool.

One named logger shared by the numerical core and the harness. The console
handler writes to stderr, leaving stdout to matrices and reports; debug and
error files are opt-in.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

LOGGER_NAME = "pinvtool"
CONSOLE_FORMAT = logging.Formatter("%(asctime)s | %(levelname)-8s | %(name)s | %(message)s", datefmt="%H:%M:%S")
FILE_FORMAT = logging.Formatter(
    "%(asctime)s | %(levelname)-8s | %(name)s | %(funcName)s:%(lineno)d | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)


def _file_handler(path: Path, level: int) -> logging.FileHandler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path)
    handler.setLevel(level)
    handler.setFormatter(FILE_FORMAT)
    return handler


class PinvLogger:
    """Named logger with a stderr console and optional debug/error files.

    Args:
        name: name of the underlying :mod:`logging` logger
        level: DEBUG, INFO, WARNING or ERROR
        debug_log_file: receives DEBUG+ records with function and line
        error_log_file: receives ERROR+ records
        stream: console stream (stderr by default)

    The console never shows DEBUG records; pass ``debug_log_file`` to keep
    the per-pass traces of the block updates.
    """

    def __init__(
        self,
        name: str = LOGGER_NAME,
        level: str = "INFO",
        debug_log_file: Optional[Path] = None,
        error_log_file: Optional[Path] = None,
        stream: Optional[TextIO] = None,
    ):
        self.logger = logging.getLogger(name)
        self.level = getattr(logging, level.upper())
        self.logger.setLevel(self.level)

        # a second instance on the same name reuses the attached handlers
        if self.logger.handlers:
            return

        console = logging.StreamHandler(stream or sys.stderr)
        console.setLevel(max(logging.INFO, self.level))
        console.setFormatter(CONSOLE_FORMAT)
        self.logger.addHandler(console)
        if debug_log_file:
            self.logger.addHandler(_file_handler(Path(debug_log_file), logging.DEBUG))
        if error_log_file:
            self.logger.addHandler(_file_handler(Path(error_log_file), logging.ERROR))

    def reset_handlers(self) -> None:
        """Close and detach every handler."""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, **kwargs)

    def info(self, message: str, **kwargs):
        self.logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs):
        self.logger.warning(message, **kwargs)

    def error(self, message: str, **kwargs):
        self.logger.error(message, **kwargs)


_logger_instance: Optional[PinvLogger] = None


def get_logger(name: str = LOGGER_NAME) -> PinvLogger:
    """Process-wide logger; console only until :func:`setup_logging` runs."""
    global _logger_instance
    if _logger_instance is None:
        _logger_instance = PinvLogger(name=name)
    return _logger_instance


def setup_logging(
    level: str = "INFO",
    debug_log_file: Optional[Path] = None,
    error_log_file: Optional[Path] = None,
) -> PinvLogger:
    """Replace the process-wide logger, dropping the handlers of the previous one.

    Called once per CLI invocation with ``--log-level`` and ``--debug-log``.
    """
    global _logger_instance
    if _logger_instance is not None:
        _logger_instance.reset_handlers()
    _logger_instance = PinvLogger(LOGGER_NAME, level, debug_log_file, error_log_file)
    return _logger_instance


def log_info(message: str):
    get_logger().info(message)


def log_warning(message: str):
    get_logger().warning(message)


def log_error(message: str):
    get_logger().error(message)


def log_debug(message: str):
    get_logger().debug(message)
