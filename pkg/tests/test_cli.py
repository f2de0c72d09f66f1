#!/usr/bin/env python3
"""
Command Line Validation Test
Tests subcommands, JSON output and exit codes
"""

import json
import logging
from pathlib import Path

import pytest

from muddy_vlsm.explorer.cli import create_parser, main, parse_muddy
from muddy_vlsm.explorer.models import DEFAULT_SUITES, ModelKind

REPO_CONFIG = str(Path(__file__).resolve().parent.parent / "config" / "config.yaml")


@pytest.fixture(autouse=True)
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


def run(capsys, *argv):
    """Run the CLI and parse its stdout"""
    command, rest = argv[0], list(argv[1:])
    code = main([command, "--config", REPO_CONFIG, *rest])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_parse_muddy():
    assert parse_muddy("1,2, 4") == frozenset({1, 2, 4})
    parser = create_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["oracle", "--n", "3", "--muddy", "a,b"])


def test_oracle(capsys):
    """Five children, four muddy: Yes in round 4, clean child in round 5"""
    code, data = run(capsys, "oracle", "--n", "5", "--muddy", "1,2,3,4")
    assert code == 0
    assert data["format"] == 1
    assert data["rounds_to_yes"] == [4, 4, 4, 4, 5]
    assert data["expected"] == ["m", "m", "m", "m", "c"]


def test_check_single_instance(capsys):
    code, data = run(capsys, "check", "--n", "2", "--muddy", "1")
    assert code == 0
    assert data["pass"] is True
    assert list(data["properties"]) == list(DEFAULT_SUITES[ModelKind.ROUNDS])


def test_check_all_instances(capsys):
    """Every three-child instance passes the rounds suite"""
    code, data = run(capsys, "check", "--model", "rounds", "--n", "3", "--all-instances")
    assert code == 0
    assert data["pass"] is True
    assert len(data["instances"]) == 7
    assert all(report["pass"] for report in data["instances"])


def test_explore_failure_exit_code(capsys):
    """An equivocation property failure on the free composition exits 1"""
    code, data = run(capsys, "explore", "--n", "2", "--muddy", "1,2", "--free",
                     "--properties", "no_equivocation_fact")
    assert code == 1
    verdict = data["properties"]["no_equivocation_fact"]
    assert verdict["pass"] is False
    assert verdict["counterexample"]["format"] == 1


def test_explore_report_file(capsys, tmp_path):
    target = tmp_path / "out" / "report.json"
    code, data = run(capsys, "explore", "--n", "1", "--muddy", "1", "--report", str(target))
    assert code == 0
    assert json.loads(target.read_text()) == data
    assert data["properties"] == {}
    assert data["final_reachable"] is True


@pytest.mark.parametrize("argv", [
    ["explore", "--model", "history", "--n", "4", "--muddy", "1"],
    ["explore", "--model", "history", "--jump", "--n", "3", "--muddy", "1"],
    ["explore", "--n", "3", "--muddy", "4"],
    ["explore", "--n", "3", "--muddy", "1", "--properties", "fact7"],
    ["check", "--model", "history", "--n", "3", "--muddy", "1", "--properties", "lemma1"],
    ["replay", "--scenario", "no_such_scenario"],
])
def test_usage_errors(capsys, argv):
    """Configuration problems exit 2 without output"""
    code, data = run(capsys, *argv)
    assert code == 2
    assert data is None


def test_argument_errors():
    assert main(["explore", "--n", "3"]) == 2
    assert main(["check", "--n", "3", "--muddy", "1", "--all-instances"]) == 2
    assert main([]) == 2


def test_replay_bundled(capsys):
    code, data = run(capsys, "replay", "--scenario", "example1_broadcast")
    assert code == 0
    assert data["accepted"] is True
    assert data["final"] is True
    assert data["statuses"] == ["m", "m", "m", "m", "c"]


def test_replay_rejected(capsys, tmp_path):
    """A rejected step exits 1 and names the predicate"""
    path = tmp_path / "forged.json"
    path.write_text(json.dumps({
        "format": 1,
        "model": "rounds",
        "n": 2,
        "muddy": [1, 2],
        "steps": [
            {"component": 1, "label": "init", "input": None},
            {"component": 1, "label": "receive", "input": {"sender": 2, "round": 0, "status": "u"}},
        ],
    }))
    code, data = run(capsys, "replay", "--scenario", str(path))
    assert code == 1
    assert data["accepted"] is False
    assert data["step"] == 1
    assert data["predicate"] == "constraint"


def without_timestamps(data):
    data.pop("generated_at")
    for report in data.get("instances", []):
        report.pop("generated_at")
    return data


@pytest.mark.parametrize("argv", [
    ["check", "--n", "3", "--muddy", "1,2"],
    ["check", "--model", "rounds", "--n", "2", "--all-instances"],
    ["check", "--model", "history", "--n", "3", "--muddy", "1"],
])
def test_check_is_deterministic(capsys, argv):
    """Two identical runs differ only in their timestamps"""
    first_code, first = run(capsys, *argv)
    second_code, second = run(capsys, *argv)
    assert first_code == second_code == 0
    assert without_timestamps(first) == without_timestamps(second)


def test_check_history_default_cap(capsys):
    """The history check picks its cap from the instance"""
    code, data = run(capsys, "check", "--model", "history", "--n", "3", "--muddy", "1,2")
    assert code == 0
    assert data["config"]["history_limit"] == 2
    assert data["truncated"] is True
    assert data["properties"]["oracle_agreement"]["detail"].endswith("within history cap 2")
