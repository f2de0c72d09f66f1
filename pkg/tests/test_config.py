#!/usr/bin/env python3
"""
Settings Validation Test
Tests YAML loading, environment overrides and validation errors
"""

from pathlib import Path

import pytest

from muddy_vlsm.config import ExplorerSettings, Settings, load_config, parse_size
from muddy_vlsm.errors import ConfigError

REPO_CONFIG = Path(__file__).resolve().parent.parent / "config" / "config.yaml"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("MUDDY_VLSM_CONFIG", "MUDDY_VLSM_HISTORY_LIMIT",
                 "MUDDY_VLSM_LOG_LEVEL", "MUDDY_VLSM_LOG_DIR"):
        monkeypatch.delenv(name, raising=False)


def test_repository_config():
    """The shipped settings file loads with the documented defaults"""
    settings = load_config(REPO_CONFIG)
    assert settings.explorer.bound_factor == 4
    assert settings.explorer.history_limit is None
    assert settings.explorer.history_limit_ceiling == 2
    assert settings.explorer.history_bound == 60
    assert settings.logging.level == "WARNING"
    assert settings.logging.file_enabled is False


def test_defaults_without_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    settings = load_config()
    assert settings == Settings()


def test_partial_file(tmp_path):
    """Missing keys keep their defaults; unknown keys are ignored"""
    path = tmp_path / "settings.yaml"
    path.write_text("explorer:\n  history_limit: 5\n  colour: blue\n")
    settings = load_config(path)
    assert settings.explorer.history_limit == 5
    assert settings.explorer.bound_factor == 4


def test_environment_overrides(tmp_path, monkeypatch):
    """Environment variables override the file"""
    path = tmp_path / "settings.yaml"
    path.write_text("explorer:\n  history_limit: 5\n")
    monkeypatch.setenv("MUDDY_VLSM_CONFIG", str(path))
    monkeypatch.setenv("MUDDY_VLSM_HISTORY_LIMIT", "2")
    monkeypatch.setenv("MUDDY_VLSM_LOG_LEVEL", "DEBUG")

    settings = load_config()
    assert settings.explorer.history_limit == 2
    assert settings.logging.level == "DEBUG"


@pytest.mark.parametrize("text", [
    "explorer: [1, 2]\n",
    "explorer:\n  bound_factor: 0\n",
    "explorer:\n  history_limit_ceiling: 0\n",
    "logging:\n  level: LOUD\n",
    "logging:\n  max_file_size: huge\n",
    "- just\n- a list\n",
    "explorer: {history_limit: [\n",
])
def test_invalid_files(tmp_path, text):
    path = tmp_path / "settings.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read"):
        load_config(tmp_path / "absent.yaml")


def test_bad_environment(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MUDDY_VLSM_HISTORY_LIMIT", "three")
    with pytest.raises(ConfigError):
        load_config()


def test_parse_size():
    assert parse_size("10MB") == 10 * 1024 * 1024
    assert parse_size("512KB") == 512 * 1024
    assert parse_size("1gb") == 1024 ** 3
    assert parse_size("100B") == 100
    with pytest.raises(ConfigError):
        parse_size("ten")


def test_explorer_settings_validation():
    with pytest.raises(ConfigError):
        ExplorerSettings(history_limit=-1)
    assert ExplorerSettings(history_limit=None).history_limit is None
    with pytest.raises(ConfigError):
        ExplorerSettings(history_limit_ceiling=0)
