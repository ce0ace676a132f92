"""
Logging configuration for dshell
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from src.config.settings import get_settings

settings = get_settings()


def setup_logger(name: str = "dshell", level: Optional[str] = None) -> logging.Logger:
    """
    Setup application logger with console and optional file handlers

    Args:
        name: Logger name
        level: Level name override (defaults to DSHELL_LOG)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, (level or settings.log_level).upper()))

    # Clear existing handlers
    logger.handlers.clear()

    # Console handler (stderr: stdout carries JSON output)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)
    console_format = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    console_handler.setFormatter(console_format)
    logger.addHandler(console_handler)

    # File handler
    if settings.log_file:
        log_file = Path(settings.log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_format = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'
        )
        file_handler.setFormatter(file_format)
        logger.addHandler(file_handler)

    return logger


def set_level(level: str) -> None:
    """Change the level of the shared logger (CLI --log override)"""
    name = "WARNING" if level.lower() in ("warn", "warning") else level.upper()
    logger.setLevel(getattr(logging, name))


# Default logger instance
logger = setup_logger()
