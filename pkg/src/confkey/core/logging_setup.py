"""Sweep logging setup.

Long sweeps run unattended, so the CLI attaches a rotating log file next to
the CSV it writes. Messages from every ``confkey.*`` logger at INFO and above
land there regardless of the global ``--debug`` flag.
"""

from __future__ import annotations

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

_MAX_BYTES = 2 * 1024 * 1024  # 2 MB per file
_BACKUP_COUNT = 3
_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured: dict[Path, RotatingFileHandler] = {}


def configure_sweep_logging(log_path: Path) -> Path:
    """Attach a rotating file handler writing to *log_path*.

    Safe to call repeatedly; each distinct path is configured once.
    Returns the resolved log path.
    """
    log_path = log_path.resolve()
    if log_path in _configured:
        return log_path

    log_path.parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(
        log_path,
        maxBytes=_MAX_BYTES,
        backupCount=_BACKUP_COUNT,
        encoding="utf-8",
    )
    handler.setLevel(logging.INFO)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT))

    pkg_logger = logging.getLogger("confkey")
    pkg_logger.addHandler(handler)
    if pkg_logger.level == logging.NOTSET or pkg_logger.level > logging.INFO:
        pkg_logger.setLevel(logging.INFO)

    _configured[log_path] = handler
    return log_path


def detach_sweep_logging(log_path: Path) -> None:
    """Remove and close the handler previously attached for *log_path*."""
    handler = _configured.pop(log_path.resolve(), None)
    if handler is None:
        return
    logging.getLogger("confkey").removeHandler(handler)
    handler.close()
