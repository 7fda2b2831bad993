"""Logging for the verification library.

One module logger, configured on first use: every record goes to
``bidihedral_verify.log`` in the log directory, warnings and errors are echoed
to stderr. Nothing is ever written to stdout, which carries graphs and
JSON-lines reports.
"""

import logging
import time
from pathlib import Path
from typing import List, Optional

from bidihedral_verify.utils.paths import get_log_dir

LOG_FILE_NAME = "bidihedral_verify.log"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# Lazy initialization variables
LOG_DIR: Optional[str] = None
LOG_FILE: Optional[str] = None
_initialized = False

logger = logging.getLogger("bidihedral_verify")


def _file_handler(path: str) -> logging.FileHandler:
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def _ensure_logger_initialized() -> None:
    """Attach the file and stderr handlers the first time anything is logged."""
    global LOG_DIR, LOG_FILE, _initialized

    if _initialized:
        return

    LOG_DIR = str(get_log_dir())
    LOG_FILE = str(Path(LOG_DIR) / LOG_FILE_NAME)

    if not logger.handlers:
        logger.addHandler(_file_handler(LOG_FILE))
        console = logging.StreamHandler()
        console.setLevel(logging.WARNING)
        console.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
        logger.addHandler(console)
        logger.setLevel(logging.INFO)

    _initialized = True


def get_log_file() -> Path:
    _ensure_logger_initialized()
    assert LOG_FILE is not None
    return Path(LOG_FILE)


def log_info(message: str) -> None:
    _ensure_logger_initialized()
    logger.info(message)


def log_error(message: str) -> None:
    _ensure_logger_initialized()
    logger.error(message)


def log_warning(message: str) -> None:
    _ensure_logger_initialized()
    logger.warning(message)


def log_debug(message: str) -> None:
    _ensure_logger_initialized()
    logger.debug(message)


def set_verbose(verbose: bool) -> None:
    """Switch the logger between INFO and DEBUG (the stderr echo stays at WARNING)."""
    _ensure_logger_initialized()
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def get_log_entries(count: int = 50, level: Optional[str] = None) -> List[str]:
    """Return the last ``count`` lines of the log file, optionally only one level."""
    path = get_log_file()
    if not path.exists():
        return []

    try:
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
    except OSError as e:
        logger.error(f"Error reading log file: {e}")
        return []
    if level is not None:
        marker = f" - {level.upper()} - "
        lines = [line for line in lines if marker in line]
    return lines[-count:]


def _reopen_file_handler() -> None:
    for handler in logger.handlers[:]:
        if isinstance(handler, logging.FileHandler):
            handler.close()
            logger.removeHandler(handler)
    assert LOG_FILE is not None
    logger.addHandler(_file_handler(LOG_FILE))


def clear_logs(backup: bool = True) -> bool:
    """Empty the log, keeping the old file as ``<log>.<unix time>`` when ``backup``."""
    path = get_log_file()
    if not path.exists():
        return True

    try:
        if backup:
            path.rename(path.with_name(f"{path.name}.{int(time.time())}"))
        else:
            path.unlink()
    except OSError as e:
        logger.error(f"Error clearing logs: {e}")
        return False
    _reopen_file_handler()
    return True


def reset_logger() -> None:
    """Reset logger state for testing purposes."""
    global LOG_DIR, LOG_FILE, _initialized

    LOG_DIR = None
    LOG_FILE = None
    _initialized = False

    for handler in logger.handlers[:]:
        handler.close()
        logger.removeHandler(handler)
