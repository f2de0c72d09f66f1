"""
Scenarios

JSON codecs for scenarios and their messages, loading of the bundled
scenarios, and step-by-step replay through the composed puzzle.
"""

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import ConfigError, DomainError, ReplayError
from ..puzzle.history import HistoryMessage
from ..puzzle.models import PuzzleInstance, initial_state, is_final
from ..puzzle.rounds import RoundMessage
from ..vlsm.composition import CompositeLabel, CompositeState
from ..vlsm.core import NO_MESSAGE, OptionalMessage, Trace, apply_transition
from .exploration import build_model, model_parts
from .models import FORMAT_VERSION, ModelKind, Scenario, ScenarioStep, parse_model

logger = logging.getLogger(__name__)

SCENARIO_PACKAGE = "muddy_vlsm"
SCENARIO_DIR = "scenarios"


def decode_message(model: ModelKind, data: Dict[str, Any]) -> OptionalMessage:
    """Build the message object of a model from its JSON form"""
    if not isinstance(data, dict):
        raise ConfigError(f"Message must be an object, got {data!r}")
    try:
        if model is ModelKind.HISTORY:
            return HistoryMessage.from_dict(data)
        return RoundMessage.from_dict(data)
    except DomainError as e:
        raise ConfigError(str(e)) from e


def encode_message(message: OptionalMessage) -> Optional[Dict[str, Any]]:
    if message is NO_MESSAGE or message is None:
        return None
    return message.to_dict()


def _step_from_dict(model: ModelKind, index: int, data: Any) -> ScenarioStep:
    if not isinstance(data, dict):
        raise ConfigError(f"Step {index} must be an object")
    try:
        component = int(data["component"])
        label = str(data["label"])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Step {index} needs an integer component and a label: {e}") from e
    reference = data.get("input")
    if reference is None:
        return ScenarioStep(component, label)
    if isinstance(reference, dict) and set(reference) == {"from_step"}:
        try:
            return ScenarioStep(component, label, from_step=int(reference["from_step"]))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Step {index}: bad step reference {reference!r}") from e
    return ScenarioStep(component, label, message=decode_message(model, reference))


def scenario_from_dict(data: Dict[str, Any]) -> Scenario:
    """
    Parse a scenario document

    Raises:
        ConfigError: on a wrong format version or malformed fields
    """
    if not isinstance(data, dict):
        raise ConfigError("Scenario must be a JSON object")
    if data.get("format") != FORMAT_VERSION:
        raise ConfigError(f"Unsupported scenario format {data.get('format')!r}")
    model = parse_model(data.get("model", ModelKind.ROUNDS.value))
    try:
        instance = PuzzleInstance.of(int(data["n"]), [int(i) for i in data["muddy"]])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Scenario needs n and muddy: {e}") from e
    steps = data.get("steps", [])
    if not isinstance(steps, list):
        raise ConfigError("Scenario steps must be a list")
    parsed = tuple(_step_from_dict(model, index, step) for index, step in enumerate(steps))
    return Scenario(model, instance, parsed, name=data.get("name"))


def bundled_scenarios() -> List[str]:
    """Names of the scenarios shipped with the package"""
    folder = resources.files(SCENARIO_PACKAGE) / SCENARIO_DIR
    return sorted(entry.name[:-len(".json")] for entry in folder.iterdir()
                  if entry.name.endswith(".json"))


def load_scenario(source: Union[str, Path]) -> Scenario:
    """
    Load a scenario from a file path or a bundled scenario name

    Args:
        source: Path to a JSON file, or a name such as "example1"

    Raises:
        ConfigError: if nothing matches or the document is malformed
    """
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        origin = str(path)
    else:
        name = path.name[:-len(".json")] if path.name.endswith(".json") else path.name
        bundled = resources.files(SCENARIO_PACKAGE) / SCENARIO_DIR / f"{name}.json"
        if not bundled.is_file():
            raise ConfigError(f"No scenario file or bundled scenario named {source!r} "
                              f"(bundled: {', '.join(bundled_scenarios())})")
        text = bundled.read_text(encoding="utf-8")
        origin = f"bundled:{name}"

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed scenario {origin}: {e}") from e
    scenario = scenario_from_dict(data)
    logger.debug(f"Loaded scenario {origin} with {len(scenario.steps)} steps")
    return scenario


def dump_scenario(scenario: Scenario, path: Optional[Union[str, Path]] = None,
                  indent: int = 2) -> str:
    text = json.dumps(scenario.to_dict(), indent=indent)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


@dataclass
class ReplayResult:
    """
    Outcome of a successful replay

    Attributes:
        scenario: The replayed scenario
        trace: Constrained trace of the composed puzzle
        outputs: Output of each step, NO_MESSAGE where none
    """
    scenario: Scenario
    trace: Trace
    outputs: List[OptionalMessage] = field(default_factory=list)

    @property
    def final(self) -> CompositeState:
        return self.trace.final

    @property
    def is_final(self) -> bool:
        return is_final(self.final)

    @property
    def self_contained(self) -> bool:
        """Every input was output by an earlier step, so the trace is valid without a closure"""
        emitted = set()
        for record in self.trace.records:
            if record.input is not NO_MESSAGE and record.input not in emitted:
                return False
            if record.output is not NO_MESSAGE:
                emitted.add(record.output)
        return True

    def statuses(self) -> List[Optional[str]]:
        return [child.status.value if child.running else None for child in self.final]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT_VERSION,
            "scenario": self.scenario.to_dict(),
            "accepted": True,
            "steps": len(self.trace),
            "final_state": [repr(child) for child in self.final],
            "statuses": self.statuses(),
            "final": self.is_final,
            "self_contained": self.self_contained,
            "outputs": [encode_message(m) for m in self.outputs],
        }


def replay(scenario: Scenario) -> ReplayResult:
    """
    Execute a scenario through the constrained composition

    Receives take either the output of an earlier step or an explicit
    message; every other step takes no message.

    Raises:
        ReplayError: naming the first rejected step and the predicate at fault
    """
    instance = scenario.instance
    children, constraint = model_parts(scenario.model, instance)
    vlsm = build_model(scenario.model, instance)

    trace = Trace(initial_state(instance))
    outputs: List[OptionalMessage] = []

    for index, step in enumerate(scenario.steps):
        state = trace.final
        message: OptionalMessage = NO_MESSAGE
        if step.from_step is not None:
            message = outputs[step.from_step]
            if message is NO_MESSAGE:
                raise ReplayError(index, step.label, "reference",
                                  f"step {step.from_step} emitted no message")
        elif step.message is not None:
            message = step.message

        label = CompositeLabel(step.component, step.label)
        component = children[step.component - 1]
        if step.label not in component.labels or not component.valid(
                step.label, state.component(step.component), message):
            raise ReplayError(index, step.label, "component",
                              f"child {step.component} at {state.component(step.component)!r} "
                              f"rejects input {message!r}")
        if not constraint(label, state, message):
            raise ReplayError(index, step.label, "constraint",
                              f"{constraint.name} rejects {message!r} for child {step.component}")

        record = apply_transition(vlsm, label, state, message)
        trace = trace.extend(record)
        outputs.append(record.output)
        logger.debug(f"step {index}: {label} -> {record.destination.component(step.component)!r}")

    return ReplayResult(scenario, trace, outputs)
