"""
Utility Module

Logging infrastructure shared by the explorer and the command line.
"""

from .logging import (
    ColoredFormatter,
    JsonFormatter,
    LogConfig,
    StructuredLogger,
    get_logger,
    setup_logging,
)

__all__ = [
    "ColoredFormatter",
    "JsonFormatter",
    "LogConfig",
    "StructuredLogger",
    "get_logger",
    "setup_logging",
]
