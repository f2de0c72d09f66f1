#!/usr/bin/env python3
"""
Configuration Validation Script
Validates the package layout, settings file and bundled scenarios
"""

import json
import os
import sys

REQUIRED_FILES = {
    "muddy_vlsm/__init__.py": "Main package initialization",
    "muddy_vlsm/config.py": "Settings loader",
    "muddy_vlsm/errors.py": "Error hierarchy and exit codes",
    "muddy_vlsm/vlsm/core.py": "VLSM definitions, traces and closure",
    "muddy_vlsm/vlsm/composition.py": "Composition and constraints",
    "muddy_vlsm/puzzle/models.py": "Puzzle data models",
    "muddy_vlsm/puzzle/rounds.py": "Rounds protocol",
    "muddy_vlsm/puzzle/history.py": "History protocol",
    "muddy_vlsm/puzzle/formula.py": "Epistemic formula encoding",
    "muddy_vlsm/puzzle/oracle.py": "Kripke oracle",
    "muddy_vlsm/explorer/exploration.py": "Exploration and reports",
    "muddy_vlsm/explorer/properties.py": "Property checks",
    "muddy_vlsm/explorer/scenario.py": "Scenario codecs and replay",
    "muddy_vlsm/explorer/cli.py": "Command line interface",
    "muddy_vlsm/utils/logging.py": "Logging configuration",
    "muddy_vlsm/requirements.txt": "Python dependencies",
    "config/config.yaml": "Main configuration file",
    "setup.py": "Package setup configuration",
}

SCENARIO_DIR = "muddy_vlsm/scenarios"


def validate_file_structure():
    """Validate that all required files exist"""
    print("🔍 Validating file structure...")

    missing_files = [(path, description) for path, description in REQUIRED_FILES.items()
                     if not os.path.exists(path)]
    empty_files = [(path, description) for path, description in REQUIRED_FILES.items()
                   if path.endswith(".py") and os.path.exists(path) and os.path.getsize(path) < 50]

    if missing_files:
        print("❌ Missing files:")
        for file_path, description in missing_files:
            print(f"   - {file_path} ({description})")
    if empty_files:
        print("⚠️  Possibly empty files:")
        for file_path, description in empty_files:
            print(f"   - {file_path} ({description})")

    if not missing_files and not empty_files:
        print("✅ All required files present and non-empty")
        return True
    print(f"❌ Found {len(missing_files)} missing and {len(empty_files)} possibly empty files")
    return False


def validate_config_yaml():
    """Validate the settings file through the package loader"""
    print("🔍 Validating config.yaml...")

    try:
        from muddy_vlsm.config import load_config
        settings = load_config("config/config.yaml")
    except Exception as e:
        print(f"❌ Configuration file invalid: {e}")
        return False

    print("✅ Configuration file is valid")
    print(f"   - Rounds bound factor: {settings.explorer.bound_factor}")
    print(f"   - History limit: {settings.explorer.history_limit} "
          f"(ceiling {settings.explorer.history_limit_ceiling})")
    print(f"   - Log level: {settings.logging.level}")
    return True


def validate_scenarios():
    """Every bundled scenario parses and replays"""
    print("🔍 Validating bundled scenarios...")

    if not os.path.isdir(SCENARIO_DIR):
        print(f"❌ Scenario directory not found: {SCENARIO_DIR}")
        return False

    try:
        from muddy_vlsm.explorer.scenario import replay, scenario_from_dict
    except ImportError as e:
        print(f"❌ Cannot import the scenario module: {e}")
        return False

    problems = []
    names = sorted(name for name in os.listdir(SCENARIO_DIR) if name.endswith(".json"))
    for name in names:
        path = os.path.join(SCENARIO_DIR, name)
        try:
            with open(path, "r", encoding="utf-8") as f:
                result = replay(scenario_from_dict(json.load(f)))
            print(f"   - {name}: {len(result.trace)} steps, statuses {result.statuses()}")
        except Exception as e:
            problems.append((name, str(e)))

    if problems:
        print("❌ Broken scenarios:")
        for name, error in problems:
            print(f"   - {name}: {error}")
        return False
    print(f"✅ All {len(names)} bundled scenarios replay")
    return True


def validate_python_files():
    """Basic validation of Python files"""
    print("🔍 Validating Python file syntax...")

    python_files = []
    for root, _dirs, files in os.walk("muddy_vlsm"):
        python_files.extend(os.path.join(root, name) for name in files if name.endswith(".py"))

    syntax_errors = []
    for file_path in python_files:
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                compile(f.read(), file_path, "exec")
        except SyntaxError as e:
            syntax_errors.append((file_path, str(e)))

    if syntax_errors:
        print("❌ Python syntax errors found:")
        for file_path, error in syntax_errors:
            print(f"   - {file_path}: {error}")
        return False
    print(f"✅ All {len(python_files)} Python files have valid syntax")
    return True


def main():
    print("=" * 60)
    print("🔍 CONFIGURATION VALIDATION")
    print("=" * 60)

    validators = [
        validate_file_structure,
        validate_config_yaml,
        validate_scenarios,
        validate_python_files,
    ]

    passed = 0
    for validator in validators:
        if validator():
            passed += 1
        print()

    print("=" * 60)
    if passed == len(validators):
        print("🎉 ALL CONFIGURATION VALIDATIONS PASSED!")
    else:
        print(f"⚠️  {len(validators) - passed} validations failed")
    print("=" * 60)
    return 0 if passed == len(validators) else 1


if __name__ == "__main__":
    sys.exit(main())
