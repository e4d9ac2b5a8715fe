import logging
import sys
from logging.handlers import TimedRotatingFileHandler
from typing import Optional, Union

from src.app.core.config import get_settings

settings = get_settings()

# processName tells pool workers apart when benchmark or run_chains fan out
LOG_FORMAT = "%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(message)s"


def _resolve_log_level(log_level: Optional[Union[int, str]]) -> int:
    value = log_level if log_level is not None else settings.LOG_LEVEL
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        candidate = getattr(logging, value.upper(), None)
        if isinstance(candidate, int):
            return candidate
        if value.isdigit():
            return int(value)
    raise ValueError(f"Invalid log level: {value}")


def get_logger(name: str, log_level: Optional[Union[int, str]] = None, log_file: str = "") -> logging.Logger:
    """Non-propagating logger with a stdout handler and, if LOG_FILE is set, a rotating file."""
    logger = logging.getLogger(name)
    logger.setLevel(_resolve_log_level(log_level))
    logger.propagate = False

    if not logger.handlers:
        formatter = logging.Formatter(LOG_FORMAT)
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

        log_file = log_file or settings.LOG_FILE
        if log_file:
            file_handler = TimedRotatingFileHandler(log_file, when="D", interval=2, backupCount=5)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    return logger


class ChainLogger(logging.LoggerAdapter):
    """Prefixes every message with `run_id=... chain=...`."""

    def process(self, msg, kwargs):
        return f"run_id={self.extra['run_id']} chain={self.extra['chain_id']} {msg}", kwargs


def chain_logger(name: str, run_id: str, chain_id: int = 0) -> ChainLogger:
    return ChainLogger(get_logger(name), {"run_id": run_id, "chain_id": chain_id})
