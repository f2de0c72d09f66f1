"""
Explorer Data Models

Exploration configuration, replayable scenarios, property verdicts and the
reachability report, with their JSON (format 1) representations.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..errors import ConfigError
from ..puzzle.history import SUPPORTED_CHILDREN
from ..puzzle.models import LABEL_NAMES, JUMP, PuzzleInstance

FORMAT_VERSION = 1


class ModelKind(Enum):
    """Protocol family explored"""
    ROUNDS = "rounds"
    ROUNDS_JUMP = "rounds_jump"
    HISTORY = "history"

    @property
    def with_jump(self) -> bool:
        return self is ModelKind.ROUNDS_JUMP

    @property
    def rounds_family(self) -> bool:
        return self is not ModelKind.HISTORY


FACT1 = "fact1"
LEMMA1 = "lemma1"
FINALITY = "finality"
PROGRESS = "progress"
TERMINATION = "termination"
NO_EQUIVOCATION_FACT = "no_equivocation_fact"
FINAL_REACHABLE = "final_reachable"
ORACLE_AGREEMENT = "oracle_agreement"
TWO_PARTY_LEAK = "two_party_leak"

PROPERTY_NAMES = (FACT1, LEMMA1, FINALITY, PROGRESS, TERMINATION, NO_EQUIVOCATION_FACT,
                  FINAL_REACHABLE, ORACLE_AGREEMENT, TWO_PARTY_LEAK)
ROUNDS_ONLY = frozenset({LEMMA1, PROGRESS, TERMINATION, NO_EQUIVOCATION_FACT})

DEFAULT_SUITES = {
    ModelKind.ROUNDS: (FACT1, LEMMA1, FINALITY, PROGRESS, TERMINATION,
                       NO_EQUIVOCATION_FACT, FINAL_REACHABLE, ORACLE_AGREEMENT),
    ModelKind.ROUNDS_JUMP: (FACT1, LEMMA1, FINALITY, PROGRESS, TERMINATION,
                            NO_EQUIVOCATION_FACT, FINAL_REACHABLE, ORACLE_AGREEMENT),
    ModelKind.HISTORY: (FACT1, FINALITY, FINAL_REACHABLE, ORACLE_AGREEMENT, TWO_PARTY_LEAK),
}


def parse_model(value: Union[str, ModelKind]) -> ModelKind:
    if isinstance(value, ModelKind):
        return value
    try:
        return ModelKind(value)
    except ValueError:
        choices = ", ".join(kind.value for kind in ModelKind)
        raise ConfigError(f"Unknown model {value!r} (choose from {choices})") from None


@dataclass
class ExplorationConfig:
    """
    What to explore and which properties to check

    Attributes:
        model: Protocol family
        instance: Puzzle instance
        bound: Sweep bound; None selects the model default
        history_limit: Longest child history kept (history model only); None
            selects min(|Muddy|, history_limit_ceiling)
        properties: Properties to check; None selects nothing, use
            with_default_suite() for the model's full suite
        constrained: False explores the free composition
        report_path: Where to write the report, if anywhere
        bound_factor: Rounds default bound = bound_factor * n * (n + 2)
        history_bound: History default bound
        history_limit_ceiling: Upper end of the per-instance history limit
    """
    model: ModelKind
    instance: PuzzleInstance
    bound: Optional[int] = None
    history_limit: Optional[int] = None
    properties: Tuple[str, ...] = ()
    constrained: bool = True
    report_path: Optional[Path] = None
    bound_factor: int = 4
    history_bound: int = 60
    history_limit_ceiling: int = 2

    def __post_init__(self):
        self.model = parse_model(self.model)
        self.properties = tuple(dict.fromkeys(self.properties))
        if self.model is ModelKind.HISTORY and self.instance.n != SUPPORTED_CHILDREN:
            raise ConfigError(
                f"The history model needs n = {SUPPORTED_CHILDREN}, got n = {self.instance.n}")
        if self.bound is not None and self.bound < 0:
            raise ConfigError(f"Sweep bound must be >= 0, got {self.bound}")
        if self.history_limit is not None and self.history_limit < 0:
            raise ConfigError(f"History limit must be >= 0, got {self.history_limit}")
        if self.history_limit_ceiling < 1:
            raise ConfigError(f"History limit ceiling must be >= 1, got {self.history_limit_ceiling}")
        unknown = [name for name in self.properties if name not in PROPERTY_NAMES]
        if unknown:
            raise ConfigError(f"Unknown properties {unknown} (choose from {', '.join(PROPERTY_NAMES)})")
        if not self.model.rounds_family:
            misplaced = [name for name in self.properties if name in ROUNDS_ONLY]
            if misplaced:
                raise ConfigError(f"Properties {misplaced} apply to the rounds models only")
        if self.report_path is not None:
            self.report_path = Path(self.report_path)

    def with_default_suite(self) -> "ExplorationConfig":
        self.properties = DEFAULT_SUITES[self.model]
        return self

    @property
    def sweep_bound(self) -> int:
        if self.bound is not None:
            return self.bound
        if self.model is ModelKind.HISTORY:
            return self.history_bound
        n = self.instance.n
        return self.bound_factor * n * (n + 2)

    @property
    def effective_history_limit(self) -> Optional[int]:
        if self.model is not ModelKind.HISTORY:
            return None
        if self.history_limit is not None:
            return self.history_limit
        return min(len(self.instance.muddy), self.history_limit_ceiling)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.value,
            "n": self.instance.n,
            "muddy": sorted(self.instance.muddy),
            "bound": self.sweep_bound,
            "history_limit": self.effective_history_limit,
            "constrained": self.constrained,
            "properties": list(self.properties),
        }


@dataclass(frozen=True)
class ScenarioStep:
    """
    One scheduled step

    Attributes:
        component: Child taking the step
        label: init, emit, receive or jump
        from_step: 0-based index of an earlier step whose output is the input
        message: Explicit input message
    """
    component: int
    label: str
    from_step: Optional[int] = None
    message: Any = None

    def __post_init__(self):
        if self.label not in LABEL_NAMES:
            raise ConfigError(f"Unknown label {self.label!r}")
        if self.from_step is not None and self.message is not None:
            raise ConfigError("A step takes either a step reference or an explicit message")

    @property
    def has_input(self) -> bool:
        return self.from_step is not None or self.message is not None


@dataclass(frozen=True)
class Scenario:
    """Instance plus an ordered schedule of steps"""
    model: ModelKind
    instance: PuzzleInstance
    steps: Tuple[ScenarioStep, ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "model", parse_model(self.model))
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.model is ModelKind.HISTORY and self.instance.n != SUPPORTED_CHILDREN:
            raise ConfigError(
                f"The history model needs n = {SUPPORTED_CHILDREN}, got n = {self.instance.n}")
        for index, step in enumerate(self.steps):
            if not 1 <= step.component <= self.instance.n:
                raise ConfigError(f"Step {index}: component {step.component} outside 1..{self.instance.n}")
            if step.from_step is not None and not 0 <= step.from_step < index:
                raise ConfigError(f"Step {index}: reference {step.from_step} is not an earlier step")
            if step.label == JUMP and not self.model.with_jump:
                raise ConfigError(f"Step {index}: jump needs the rounds_jump model")

    def to_dict(self) -> Dict[str, Any]:
        steps = []
        for step in self.steps:
            if step.from_step is not None:
                reference: Any = {"from_step": step.from_step}
            elif step.message is not None:
                reference = step.message.to_dict()
            else:
                reference = None
            steps.append({"component": step.component, "label": step.label, "input": reference})
        data: Dict[str, Any] = {"format": FORMAT_VERSION}
        if self.name:
            data["name"] = self.name
        data.update({
            "model": self.model.value,
            "n": self.instance.n,
            "muddy": sorted(self.instance.muddy),
            "steps": steps,
        })
        return data


@dataclass
class PropertyVerdict:
    """Outcome of one property check"""
    name: str
    passed: bool
    detail: str = ""
    counterexample: Optional[Scenario] = None
    witness: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pass": self.passed,
            "detail": self.detail,
            "witness": self.witness,
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }


@dataclass
class ReachabilityReport:
    """
    Outcome of one exploration

    Attributes:
        config: Exploration configuration
        sweeps: Sweeps performed
        converged: Whether the closure reached its fixpoint
        truncated: Whether the history cap pruned states
        states: Valid composite states found
        messages: Valid messages found, excluding the no-message marker
        sweep_counts: Cumulative (states, messages) after each sweep
        final_states: Number of reachable final states
        shortest_final_trace: Scenario reaching a final state in fewest steps
        receive_counts: Receive steps per child on that trace
        properties: Verdicts by property name, in check order
        oracle: Comparison with the synchronous solution
        generated_at: Timestamp; the only field that varies between runs
    """
    config: ExplorationConfig
    sweeps: int
    converged: bool
    truncated: bool
    states: int
    messages: int
    sweep_counts: List[Tuple[int, int]] = field(default_factory=list)
    final_states: int = 0
    shortest_final_trace: Optional[Scenario] = None
    receive_counts: Dict[int, int] = field(default_factory=dict)
    properties: Dict[str, PropertyVerdict] = field(default_factory=dict)
    oracle: Dict[str, Any] = field(default_factory=dict)
    generated_at: str = ""

    @property
    def final_reachable(self) -> bool:
        return self.final_states > 0

    @property
    def passed(self) -> bool:
        return self.converged and all(v.passed for v in self.properties.values())

    def failures(self) -> List[str]:
        return [name for name, verdict in self.properties.items() if not verdict.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT_VERSION,
            "generated_at": self.generated_at,
            "config": self.config.to_dict(),
            "sweeps": self.sweeps,
            "converged": self.converged,
            "truncated": self.truncated,
            "states": self.states,
            "messages": self.messages,
            "sweep_counts": [{"sweep": index, "states": s, "messages": m}
                             for index, (s, m) in enumerate(self.sweep_counts)],
            "final_reachable": self.final_reachable,
            "final_states": self.final_states,
            "shortest_final_trace": (self.shortest_final_trace.to_dict()
                                     if self.shortest_final_trace else None),
            "receive_counts": {str(i): count for i, count in sorted(self.receive_counts.items())},
            "properties": {name: verdict.to_dict() for name, verdict in self.properties.items()},
            "oracle": self.oracle,
            "pass": self.passed,
        }
