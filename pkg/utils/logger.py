"""
Logging Utility for the Kappa/Probability Inference Engine

This module provides the package-wide logging setup:
- Console output on stderr (command output on stdout stays byte-stable)
- Daily log file (DEBUG+) with automatic cleanup
- Color-coded console output when colorama is installed
"""

import logging
import os
import sys
from datetime import datetime, timedelta
from pathlib import Path

# Try to import colorama for colored console output
try:
    from colorama import Fore, Style, init
    init(autoreset=True)
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False


# ============================================================================
# CONFIGURATION
# ============================================================================

try:
    from config import LOGS_DIR, LOG_LEVEL, LOG_TO_FILE
except ImportError:
    LOGS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "logs")
    LOG_LEVEL = "WARNING"
    LOG_TO_FILE = True

LOG_FILE_PREFIX = "kappa_"


# ============================================================================
# COLOR MAPPING (if colorama is available)
# ============================================================================

if COLORAMA_AVAILABLE:
    LOG_COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.RED + Style.BRIGHT,
    }
else:
    LOG_COLORS = {}


class ColoredConsoleFormatter(logging.Formatter):
    """Custom formatter with color support for console output."""

    def format(self, record: logging.LogRecord) -> str:
        if COLORAMA_AVAILABLE and record.levelname in LOG_COLORS and sys.stderr.isatty():
            record = logging.makeLogRecord(record.__dict__)
            record.levelname = f"{LOG_COLORS[record.levelname]}{record.levelname}{Style.RESET_ALL}"

        return super().format(record)


# ============================================================================
# LOG CLEANUP FUNCTION
# ============================================================================

def cleanup_old_logs(days_to_keep: int = 30) -> int:
    """
    Delete log files older than specified number of days.

    Args:
        days_to_keep: Number of days to keep logs (default: 30)

    Returns:
        Number of log files deleted
    """
    deleted_count = 0
    cutoff_date = datetime.now() - timedelta(days=days_to_keep)

    log_dir = Path(LOGS_DIR)
    if not log_dir.exists():
        return 0

    for log_file in log_dir.glob(f"{LOG_FILE_PREFIX}*.log"):
        try:
            file_time = datetime.fromtimestamp(log_file.stat().st_mtime)
            if file_time < cutoff_date:
                log_file.unlink()
                deleted_count += 1
        except OSError as e:
            print(f"Warning: Could not process log file {log_file}: {e}", file=sys.stderr)

    return deleted_count


# ============================================================================
# LOGGER SETUP FUNCTION
# ============================================================================

def setup_logger(name: str, level: int = logging.WARNING, to_file: bool = True) -> logging.Logger:
    """
    Create and configure a logger with console and file handlers.

    Args:
        name: Logger name (typically module name)
        level: Console logging level
        to_file: Attach the daily DEBUG file handler

    Returns:
        Configured logger instance

    Example:
        >>> logger = setup_logger("kappa.sweep", logging.INFO)
        >>> logger.info("Sweep started")
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)  # Capture all levels, handlers will filter
    logger.propagate = False

    # Prevent duplicate handlers if logger already exists
    if logger.handlers:
        return logger

    # ========================================================================
    # CONSOLE HANDLER
    # ========================================================================

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(ColoredConsoleFormatter(
        "[%(asctime)s] %(levelname)s - %(message)s",
        datefmt="%H:%M:%S"
    ))
    logger.addHandler(console_handler)

    # ========================================================================
    # FILE HANDLER (DEBUG+)
    # ========================================================================

    if to_file:
        try:
            os.makedirs(LOGS_DIR, exist_ok=True)
            log_filename = f"{LOG_FILE_PREFIX}{datetime.now().strftime('%Y-%m-%d')}.log"
            log_filepath = os.path.join(LOGS_DIR, log_filename)

            file_handler = logging.FileHandler(log_filepath, mode='a', encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - "
                "%(funcName)s:%(lineno)d - %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S"
            ))
            logger.addHandler(file_handler)
            logger.debug(f"Logging to file: {log_filepath}")

        except OSError as e:
            # Graceful degradation: Continue with console-only logging
            print(f"Warning: Could not create file handler: {e}", file=sys.stderr)

        try:
            deleted = cleanup_old_logs(days_to_keep=30)
            if deleted > 0:
                logger.debug(f"Cleaned up {deleted} old log file(s)")
        except OSError as e:
            logger.warning(f"Could not cleanup old logs: {e}")

    return logger


# ============================================================================
# DEFAULT LOGGER INSTANCE
# ============================================================================

logger = setup_logger(
    "kappa_engine",
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    to_file=LOG_TO_FILE,
)
