"""
Configuration

Settings for the explorer and logging, read from config/config.yaml and
overridden by environment variables. Command-line flags override both.
"""

import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("config/config.yaml")
CONFIG_ENV = "MUDDY_VLSM_CONFIG"

_SIZE_MULTIPLIERS = {
    "KB": 1024,
    "MB": 1024 * 1024,
    "GB": 1024 * 1024 * 1024,
    "B": 1,
}


def parse_size(size: str) -> int:
    """Parse a size string like '10MB' into bytes"""
    text = str(size).upper().strip()
    for suffix, multiplier in _SIZE_MULTIPLIERS.items():
        if text.endswith(suffix):
            try:
                return int(float(text[:-len(suffix)]) * multiplier)
            except ValueError:
                break
    raise ConfigError(f"Invalid size {size!r}")


@dataclass
class ExplorerSettings:
    bound_factor: int = 4           # rounds default bound: factor * n * (n + 2)
    history_limit: Optional[int] = None     # None: min(|Muddy|, history_limit_ceiling)
    history_limit_ceiling: int = 2
    history_bound: int = 60
    report_indent: int = 2

    def __post_init__(self):
        if self.bound_factor < 1:
            raise ConfigError(f"bound_factor must be >= 1, got {self.bound_factor}")
        if self.history_limit is not None and self.history_limit < 0:
            raise ConfigError(f"history_limit must be >= 0, got {self.history_limit}")
        if self.history_limit_ceiling < 1:
            raise ConfigError(f"history_limit_ceiling must be >= 1, got {self.history_limit_ceiling}")
        if self.history_bound < 0:
            raise ConfigError(f"history_bound must be >= 0, got {self.history_bound}")


@dataclass
class LoggingSettings:
    level: str = "WARNING"
    log_dir: Path = Path("./logs")
    console_enabled: bool = True
    file_enabled: bool = False
    json_format: bool = False
    max_file_size: str = "10MB"
    backup_count: int = 5
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    def __post_init__(self):
        self.log_dir = Path(self.log_dir)
        if not isinstance(getattr(logging, str(self.level).upper(), None), int):
            raise ConfigError(f"Unknown log level {self.level!r}")
        parse_size(self.max_file_size)


@dataclass
class Settings:
    explorer: ExplorerSettings = field(default_factory=ExplorerSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)


def _section(cls, data: Any, name: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"Section {name!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            logger.warning(f"Ignoring unknown setting {name}.{key}")
    try:
        return cls(**{key: value for key, value in data.items() if key in known})
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid {name} settings: {e}") from e


def _resolve_path(path: Optional[Union[str, Path]]) -> Optional[Path]:
    if path is not None:
        return Path(path)
    if os.getenv(CONFIG_ENV):
        return Path(os.environ[CONFIG_ENV])
    if DEFAULT_CONFIG_PATH.exists():
        return DEFAULT_CONFIG_PATH
    return None


def load_config(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load settings from YAML and environment variables

    Args:
        path: Explicit settings file; otherwise $MUDDY_VLSM_CONFIG, then
            config/config.yaml when present, then built-in defaults

    Returns:
        Settings instance

    Raises:
        ConfigError: if the file is missing, unreadable or malformed
    """
    data: Dict[str, Any] = {}
    resolved = _resolve_path(path)
    if resolved is not None:
        try:
            with open(resolved, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except OSError as e:
            raise ConfigError(f"Cannot read settings file {resolved}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed settings file {resolved}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Settings file {resolved} must contain a mapping")

    for name in ("explorer", "logging"):
        if not isinstance(data.get(name) or {}, dict):
            raise ConfigError(f"Section {name!r} must be a mapping")
    explorer_data = dict(data.get("explorer") or {})
    logging_data = dict(data.get("logging") or {})

    if os.getenv("MUDDY_VLSM_HISTORY_LIMIT"):
        try:
            explorer_data["history_limit"] = int(os.environ["MUDDY_VLSM_HISTORY_LIMIT"])
        except ValueError as e:
            raise ConfigError(f"MUDDY_VLSM_HISTORY_LIMIT must be an integer: {e}") from e
    if os.getenv("MUDDY_VLSM_LOG_LEVEL"):
        logging_data["level"] = os.environ["MUDDY_VLSM_LOG_LEVEL"]
    if os.getenv("MUDDY_VLSM_LOG_DIR"):
        logging_data["log_dir"] = os.environ["MUDDY_VLSM_LOG_DIR"]

    return Settings(
        explorer=_section(ExplorerSettings, explorer_data, "explorer"),
        logging=_section(LoggingSettings, logging_data, "logging"),
    )
