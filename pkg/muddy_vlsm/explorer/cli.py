"""
Command Line Interface

muddy-vlsm explore | replay | check | oracle

Results are printed to stdout as JSON; logs go to stderr. Exit codes: 0 when
every requested check passes, 1 on a property failure, non-convergence or
rejected replay, 2 on usage and configuration errors.
"""

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence

from ..config import Settings, load_config
from ..errors import ConfigError, ConstructionError, DomainError, ExitCode, ReplayError
from ..puzzle.models import PuzzleInstance, all_instances
from ..puzzle.oracle import Assignment, expected_status, sync_rounds
from ..utils.logging import LogConfig, setup_logging
from .exploration import explore
from .models import FORMAT_VERSION, ExplorationConfig, ModelKind, parse_model
from .scenario import load_scenario, replay

logger = logging.getLogger(__name__)


def parse_muddy(value: str) -> FrozenSet[int]:
    """Parse "1,2,4" into {1, 2, 4}"""
    try:
        muddy = frozenset(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated child indices, got {value!r}")
    if not muddy:
        raise argparse.ArgumentTypeError("at least one child must be muddy")
    return muddy


def parse_properties(value: str) -> List[str]:
    return [name.strip() for name in value.split(",") if name.strip()]


def _positive(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def _natural(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {number}")
    return number


def _emit(data: Dict[str, Any], settings: Settings, path: Optional[str]) -> None:
    text = json.dumps(data, indent=settings.explorer.report_indent)
    print(text)
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {target}")


def _model_from_args(args: argparse.Namespace) -> ModelKind:
    model = parse_model(args.model)
    if args.jump:
        if model is ModelKind.HISTORY:
            raise ConfigError("--jump applies to the rounds model only")
        model = ModelKind.ROUNDS_JUMP
    return model


def _exploration_config(args: argparse.Namespace, settings: Settings, model: ModelKind,
                        instance: PuzzleInstance, default_suite: bool) -> ExplorationConfig:
    history_limit = settings.explorer.history_limit
    if args.history_limit is not None:
        history_limit = args.history_limit
    config = ExplorationConfig(
        model=model,
        instance=instance,
        bound=args.bound,
        history_limit=history_limit,
        properties=tuple(args.properties or ()),
        constrained=not args.free,
        report_path=args.report,
        bound_factor=settings.explorer.bound_factor,
        history_bound=settings.explorer.history_bound,
        history_limit_ceiling=settings.explorer.history_limit_ceiling,
    )
    if default_suite and not args.properties:
        config.with_default_suite()
    return config


def _instance(args: argparse.Namespace) -> PuzzleInstance:
    return PuzzleInstance.of(args.n, args.muddy)


def cmd_explore(args: argparse.Namespace, settings: Settings) -> int:
    config = _exploration_config(args, settings, _model_from_args(args), _instance(args),
                                 default_suite=False)
    report = explore(config)
    _emit(report.to_dict(), settings, args.report)
    return ExitCode.OK if report.passed else ExitCode.PROPERTY_FAILURE


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    model = _model_from_args(args)
    if not args.all_instances:
        config = _exploration_config(args, settings, model, _instance(args), default_suite=True)
        report = explore(config)
        _emit(report.to_dict(), settings, args.report)
        return ExitCode.OK if report.passed else ExitCode.PROPERTY_FAILURE

    reports = []
    for instance in all_instances(args.n):
        config = _exploration_config(args, settings, model, instance, default_suite=True)
        config.report_path = None
        reports.append(explore(config))
    passed = all(report.passed for report in reports)
    aggregate = {
        "format": FORMAT_VERSION,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "model": model.value,
        "n": args.n,
        "instances": [report.to_dict() for report in reports],
        "pass": passed,
    }
    failed = [str(report.config.instance) for report in reports if not report.passed]
    if failed:
        logger.warning(f"Failing instances: {'; '.join(failed)}")
    _emit(aggregate, settings, args.report)
    return ExitCode.OK if passed else ExitCode.PROPERTY_FAILURE


def cmd_replay(args: argparse.Namespace, settings: Settings) -> int:
    scenario = load_scenario(args.scenario)
    try:
        result = replay(scenario)
    except ReplayError as e:
        logger.error(f"Replay rejected: {e}")
        _emit({
            "format": FORMAT_VERSION,
            "scenario": scenario.to_dict(),
            "accepted": False,
            "step": e.step_index,
            "label": e.label,
            "predicate": e.predicate,
            "detail": e.detail,
        }, settings, args.report)
        return ExitCode.PROPERTY_FAILURE
    _emit(result.to_dict(), settings, args.report)
    return ExitCode.OK


def cmd_oracle(args: argparse.Namespace, settings: Settings) -> int:
    x = Assignment.from_muddy(args.n, args.muddy)
    solution = sync_rounds(x)
    data = solution.to_dict()
    data["format"] = FORMAT_VERSION
    data["expected"] = [expected_status(x, i).value for i in range(1, args.n + 1)]
    _emit(data, settings, None)
    return ExitCode.OK


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Settings file (default: config/config.yaml)")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        type=str.upper, help="Override the configured log level")

    explored = argparse.ArgumentParser(add_help=False)
    explored.add_argument("--model", default=ModelKind.ROUNDS.value,
                          choices=[kind.value for kind in ModelKind])
    explored.add_argument("--jump", action="store_true", help="Enable jump transitions (rounds)")
    explored.add_argument("--n", type=_positive, required=True, help="Number of children")
    explored.add_argument("--bound", type=_natural, default=None,
                          help="Sweep bound (default: model dependent)")
    explored.add_argument("--history-limit", type=_natural, default=None,
                          help="Longest child history kept (history model; "
                               "default: min(|Muddy|, explorer.history_limit_ceiling))")
    explored.add_argument("--properties", type=parse_properties, default=None,
                          help="Comma-separated properties to check")
    explored.add_argument("--free", action="store_true",
                          help="Explore the free composition (no constraint)")
    explored.add_argument("--report", default=None, help="Also write the JSON report here")

    parser = argparse.ArgumentParser(
        prog="muddy-vlsm",
        description="Explore and check the asynchronous Muddy Children protocols")
    sub = parser.add_subparsers(dest="command", required=True)

    e = sub.add_parser("explore", parents=[common, explored],
                       help="Explore one instance and check selected properties")
    e.add_argument("--muddy", type=parse_muddy, required=True, help="Muddy children, e.g. 1,2")
    e.set_defaults(func=cmd_explore)

    c = sub.add_parser("check", parents=[common, explored],
                       help="Run the model's property suite")
    which = c.add_mutually_exclusive_group(required=True)
    which.add_argument("--muddy", type=parse_muddy, help="Muddy children, e.g. 1,2")
    which.add_argument("--all-instances", action="store_true",
                       help="Check every non-empty muddy set")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("replay", parents=[common], help="Replay a scenario step by step")
    r.add_argument("--scenario", required=True, help="Scenario file or bundled name (e.g. example1)")
    r.add_argument("--report", default=None, help="Also write the JSON result here")
    r.set_defaults(func=cmd_replay)

    o = sub.add_parser("oracle", parents=[common], help="Solve the synchronous puzzle")
    o.add_argument("--n", type=_positive, required=True, help="Number of children")
    o.add_argument("--muddy", type=parse_muddy, required=True, help="Muddy children, e.g. 1,2")
    o.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = load_config(args.config)
        setup_logging(LogConfig.from_settings(settings.logging, level=args.log_level))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.USAGE

    try:
        return int(args.func(args, settings))
    except (ConfigError, ConstructionError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.USAGE
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return ExitCode.PROPERTY_FAILURE
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return ExitCode.PROPERTY_FAILURE


if __name__ == "__main__":
    sys.exit(main())
