"""
Logging Configuration

Structured logging for the explorer: coloured console output on stderr,
optional JSON records and optional rotating log files. Stdout is left to
command results.
"""

import json
import logging
import logging.handlers
import os
import sys
import traceback
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..config import LoggingSettings, parse_size

PACKAGE_LOGGERS = (
    "muddy_vlsm",
    "muddy_vlsm.vlsm",
    "muddy_vlsm.puzzle",
    "muddy_vlsm.explorer",
)

_RESERVED_ATTRS = frozenset({
    'name', 'msg', 'args', 'levelname', 'levelno', 'pathname', 'filename',
    'module', 'lineno', 'funcName', 'created', 'msecs', 'relativeCreated',
    'thread', 'threadName', 'processName', 'process', 'message', 'exc_info',
    'exc_text', 'stack_info', 'taskName',
})


@dataclass
class LogConfig:
    """Configuration for logging setup"""
    level: str = "WARNING"
    log_dir: Path = Path("./logs")
    console_enabled: bool = True
    file_enabled: bool = False
    json_format: bool = False
    max_file_size: str = "10MB"
    backup_count: int = 5
    format_string: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_file: str = "explorer.log"

    def __post_init__(self):
        self.log_level = getattr(logging, self.level.upper(), logging.WARNING)
        self.max_file_size_bytes = parse_size(self.max_file_size)
        self.log_dir = Path(self.log_dir)
        if self.file_enabled:
            self.log_dir.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_settings(cls, settings: LoggingSettings,
                      level: Optional[str] = None) -> "LogConfig":
        return cls(
            level=level or settings.level,
            log_dir=settings.log_dir,
            console_enabled=settings.console_enabled,
            file_enabled=settings.file_enabled,
            json_format=settings.json_format,
            max_file_size=settings.max_file_size,
            backup_count=settings.backup_count,
            format_string=settings.format,
        )


class JsonFormatter(logging.Formatter):
    """One JSON object per record, context fields under "extra" """

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
            "process_id": record.process,
        }

        if record.exc_info:
            log_entry["exception"] = {
                "type": record.exc_info[0].__name__ if record.exc_info[0] else None,
                "message": str(record.exc_info[1]) if record.exc_info[1] else None,
                "traceback": traceback.format_exception(*record.exc_info),
            }

        extra_fields = {key: value for key, value in record.__dict__.items()
                        if key not in _RESERVED_ATTRS}
        if extra_fields:
            log_entry["extra"] = extra_fields

        return json.dumps(log_entry, default=str, ensure_ascii=False)


class StructuredLogger:
    """
    Logger wrapper carrying persistent context fields

    Context (for example model, n and muddy) is attached to every record
    as extra attributes, which JsonFormatter emits under "extra".
    """

    def __init__(self, logger: logging.Logger):
        self.logger = logger
        self._context: Dict[str, Any] = {}

    def set_context(self, **kwargs):
        self._context.update(kwargs)

    def clear_context(self):
        self._context.clear()

    def _log_with_context(self, level: int, message: str, exc_info: bool = False, **kwargs):
        if not self.logger.isEnabledFor(level):
            return
        combined_context = {**self._context, **kwargs}
        self.logger.log(level, message, exc_info=exc_info, extra=combined_context,
                        stacklevel=3)

    def debug(self, message: str, **kwargs):
        self._log_with_context(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs):
        self._log_with_context(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs):
        self._log_with_context(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log_with_context(logging.ERROR, message, **kwargs)

    def exception(self, message: str, **kwargs):
        self._log_with_context(logging.ERROR, message, exc_info=True, **kwargs)


class ColoredFormatter(logging.Formatter):
    """Colours level names when stderr is a terminal"""

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
        'RESET': '\033[0m',
    }

    def format(self, record: logging.LogRecord) -> str:
        if not self._should_use_colors():
            return super().format(record)

        original_levelname = record.levelname
        record.levelname = f"{self.COLORS.get(record.levelname, '')}{record.levelname}{self.COLORS['RESET']}"
        try:
            return super().format(record)
        finally:
            record.levelname = original_levelname

    def _should_use_colors(self) -> bool:
        if os.environ.get('NO_COLOR'):
            return False
        if os.environ.get('FORCE_COLOR'):
            return True
        return hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()


def setup_logging(config: LogConfig) -> Dict[str, logging.Logger]:
    """
    Set up logging with the provided configuration

    Args:
        config: LogConfig instance with logging settings

    Returns:
        Dictionary of the package loggers by name
    """
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    root_logger.setLevel(config.log_level)

    if config.console_enabled:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(config.log_level)
        if config.json_format:
            console_handler.setFormatter(JsonFormatter())
        else:
            console_handler.setFormatter(ColoredFormatter(config.format_string))
        root_logger.addHandler(console_handler)

    if config.file_enabled:
        try:
            file_handler = logging.handlers.RotatingFileHandler(
                config.log_dir / config.log_file,
                maxBytes=config.max_file_size_bytes,
                backupCount=config.backup_count,
                encoding='utf-8',
            )
            file_handler.setLevel(config.log_level)
            if config.json_format:
                file_handler.setFormatter(JsonFormatter())
            else:
                file_handler.setFormatter(logging.Formatter(config.format_string))
            root_logger.addHandler(file_handler)
        except OSError as e:
            print(f"Warning: Could not set up file logging: {e}", file=sys.stderr)

    loggers = {}
    for module_name in PACKAGE_LOGGERS:
        logger = logging.getLogger(module_name)
        logger.setLevel(config.log_level)
        loggers[module_name] = logger

    logging.getLogger(__name__).info(
        f"Logging configured - Level: {config.level}, Console: {config.console_enabled}, "
        f"File: {config.file_enabled}, JSON: {config.json_format}")
    return loggers


def get_logger(name: str, structured: bool = False) -> Union[logging.Logger, StructuredLogger]:
    """
    Get a logger instance

    Args:
        name: Logger name (usually __name__)
        structured: Whether to return a StructuredLogger wrapper
    """
    logger = logging.getLogger(name)
    if structured:
        return StructuredLogger(logger)
    return logger
