"""
VLSM Core

Single-machine VLSM definitions: labelled transitions that consume and
produce optional messages, guarded by a validity predicate. Provides
constrained and valid trace checking and the valid-message closure,
computed as a bounded global fixpoint by semi-naive saturation.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import (Any, Callable, Dict, FrozenSet, Hashable, Iterable, List,
                    Optional, Tuple)

from ..errors import DomainError

logger = logging.getLogger(__name__)


class NoMessage:
    """The distinguished no-message marker; a process-wide singleton"""

    _instance: Optional["NoMessage"] = None

    def __new__(cls) -> "NoMessage":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NO_MESSAGE"

    def __reduce__(self):
        return (NoMessage, ())


NO_MESSAGE = NoMessage()

Label = Hashable
State = Hashable
OptionalMessage = Hashable


@dataclass(frozen=True)
class VlsmDefinition:
    """
    Abstract description of one machine

    Attributes:
        name: Human-readable name used in logs and reports
        labels: Label set L
        is_state: Membership predicate for S
        is_initial: Membership predicate for S0 (a subset of S)
        initial_states: Enumerator of S0
        is_message: Membership predicate for the message domain M
        transition: tau(label, state, message) -> (state, message)
        valid: beta(label, state, message) -> bool
        initial_messages: M0
        message_domain: Tag naming M; compositions require one shared tag
        message_labels: Labels whose beta may accept a message. Every other
            label is only ever tried with NO_MESSAGE. None means all labels.
        candidate_inputs: Optional generator of the messages beta could accept
            for (label, state); the closure only tries these.
        seeds: Designated initial states; when set, closures start here
            instead of enumerating S0
    """
    name: str
    labels: Tuple[Label, ...]
    is_state: Callable[[Any], bool]
    is_initial: Callable[[Any], bool]
    initial_states: Callable[[], Iterable[State]]
    is_message: Callable[[Any], bool]
    transition: Callable[[Label, State, OptionalMessage], Tuple[State, OptionalMessage]]
    valid: Callable[[Label, State, OptionalMessage], bool]
    initial_messages: Tuple[Hashable, ...] = ()
    message_domain: str = "default"
    message_labels: Optional[FrozenSet[Label]] = None
    candidate_inputs: Optional[Callable[[Label, State], Iterable[OptionalMessage]]] = None
    seeds: Optional[Tuple[State, ...]] = None

    def __post_init__(self):
        if not self.labels:
            raise DomainError(f"VLSM {self.name!r} has an empty label set")
        if self.seeds is not None:
            for seed in self.seeds:
                if not self.is_initial(seed):
                    raise DomainError(f"Seed {seed!r} of {self.name!r} is not an initial state")
        elif next(iter(self.initial_states()), None) is None:
            raise DomainError(f"VLSM {self.name!r} has no initial states")

    def accepts_messages(self, label: Label) -> bool:
        """Whether beta may accept a message (rather than NO_MESSAGE) on label"""
        return self.message_labels is None or label in self.message_labels


@dataclass(frozen=True)
class TransitionRecord:
    """A constrained transition: tau(label, source, input) = (destination, output)"""
    label: Label
    source: State
    input: OptionalMessage
    destination: State
    output: OptionalMessage


@dataclass(frozen=True)
class Trace:
    """A sequence of constrained transitions from an initial state"""
    initial: State
    records: Tuple[TransitionRecord, ...] = ()

    @property
    def final(self) -> State:
        return self.records[-1].destination if self.records else self.initial

    def extend(self, record: TransitionRecord) -> "Trace":
        return Trace(self.initial, self.records + (record,))

    def __len__(self) -> int:
        return len(self.records)


class Validity(Enum):
    """Outcome of a valid-trace check"""
    VALID = "valid"
    INVALID = "invalid"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ClosureResult:
    """
    Valid states and messages found by valid_closure

    Attributes:
        states: Valid states in discovery order
        messages: Valid messages in discovery order, NO_MESSAGE first
        transitions: Every constrained transition with a closure-valid input
        sweeps: Saturation sweeps performed
        converged: True iff the fixpoint was reached within the bound
        history: Cumulative (states, messages) counts, index 0 being the base
            case; message counts exclude NO_MESSAGE
        pruned: Distinct destination states rejected by the admit filter
    """
    states: Tuple[State, ...]
    messages: Tuple[OptionalMessage, ...]
    transitions: Tuple[TransitionRecord, ...]
    sweeps: int
    converged: bool
    history: Tuple[Tuple[int, int], ...]
    pruned: int = 0

    @cached_property
    def state_set(self) -> FrozenSet[State]:
        return frozenset(self.states)

    @cached_property
    def message_set(self) -> FrozenSet[OptionalMessage]:
        return frozenset(self.messages)

    @property
    def truncated(self) -> bool:
        return self.pruned > 0


def apply_transition(vlsm: VlsmDefinition, label: Label, state: State,
                     message: OptionalMessage = NO_MESSAGE) -> Optional[TransitionRecord]:
    """
    Apply one transition if the validity predicate allows it

    Args:
        vlsm: Machine definition
        label: Transition label
        state: Source state; must belong to S
        message: Input message or NO_MESSAGE

    Returns:
        The transition record, or None when beta rejects the input

    Raises:
        DomainError: if state is not a state of vlsm
    """
    if not vlsm.is_state(state):
        raise DomainError(f"{state!r} is not a state of {vlsm.name!r}")
    if not vlsm.valid(label, state, message):
        return None
    destination, output = vlsm.transition(label, state, message)
    return TransitionRecord(label, state, message, destination, output)


def is_constrained_trace(vlsm: VlsmDefinition, trace: Trace) -> bool:
    """True iff the trace starts in S0 and every record re-validates"""
    if not (vlsm.is_state(trace.initial) and vlsm.is_initial(trace.initial)):
        return False
    current = trace.initial
    for record in trace.records:
        if record.source != current:
            return False
        try:
            replayed = apply_transition(vlsm, record.label, current, record.input)
        except DomainError:
            return False
        if replayed != record:
            return False
        current = record.destination
    return True


def _root_states(vlsm: VlsmDefinition) -> Tuple[State, ...]:
    if vlsm.seeds is not None:
        return vlsm.seeds
    return tuple(vlsm.initial_states())


def valid_closure(vlsm: VlsmDefinition, depth_bound: int,
                  admit: Optional[Callable[[State], bool]] = None) -> ClosureResult:
    """
    Compute valid states and messages up to depth_bound saturation sweeps

    Each sweep tries every (state, label, message) combination that became
    available since the previous sweep, so every combination is tried once.
    Outputs found during a sweep only become usable in the next one.

    Args:
        vlsm: Machine definition
        depth_bound: Maximum number of sweeps (>= 0)
        admit: Optional filter; destination states it rejects are pruned

    Returns:
        ClosureResult with the (possibly truncated) fixpoint
    """
    if depth_bound < 0:
        raise DomainError(f"depth_bound must be >= 0, got {depth_bound}")

    states: Dict[State, None] = dict.fromkeys(_root_states(vlsm))
    messages: Dict[OptionalMessage, None] = {NO_MESSAGE: None}
    messages.update(dict.fromkeys(vlsm.initial_messages))
    available = dict(messages)
    transitions: List[TransitionRecord] = []
    waiting: Dict[OptionalMessage, List[Tuple[State, Label]]] = defaultdict(list)
    pruned: Dict[State, None] = {}

    processed: List[State] = []
    frontier: List[State] = list(states)
    fresh: List[OptionalMessage] = [m for m in messages if m is not NO_MESSAGE]
    history = [(len(states), len(messages) - 1)]
    sweeps = 0

    message_labels = [label for label in vlsm.labels if vlsm.accepts_messages(label)]
    plain_labels = [label for label in vlsm.labels if not vlsm.accepts_messages(label)]

    while True:
        if not frontier and not fresh:
            converged = True
            break
        if sweeps >= depth_bound:
            converged = False
            break
        sweeps += 1
        available.update(dict.fromkeys(fresh))
        new_states: List[State] = []
        new_messages: List[OptionalMessage] = []

        def attempt(state: State, label: Label, message: OptionalMessage) -> None:
            record = apply_transition(vlsm, label, state, message)
            if record is None:
                return
            if admit is not None and not admit(record.destination):
                pruned.setdefault(record.destination)
                return
            transitions.append(record)
            if record.destination not in states:
                states[record.destination] = None
                new_states.append(record.destination)
            output = record.output
            if output is not NO_MESSAGE and output not in messages:
                messages[output] = None
                new_messages.append(output)

        for state in frontier:
            for label in plain_labels:
                attempt(state, label, NO_MESSAGE)
            for label in message_labels:
                if vlsm.candidate_inputs is None:
                    for message in list(available):
                        attempt(state, label, message)
                    continue
                for message in dict.fromkeys(vlsm.candidate_inputs(label, state)):
                    if message in available:
                        attempt(state, label, message)
                    else:
                        waiting[message].append((state, label))

        for message in fresh:
            if vlsm.candidate_inputs is None:
                for state in processed:
                    for label in message_labels:
                        attempt(state, label, message)
            else:
                for state, label in waiting.pop(message, ()):
                    attempt(state, label, message)

        processed.extend(frontier)
        frontier, fresh = new_states, new_messages
        history.append((len(states), len(messages) - 1))
        logger.debug(f"{vlsm.name}: sweep {sweeps} -> {len(states)} states, "
                     f"{len(messages) - 1} messages")

    if not converged:
        logger.warning(f"{vlsm.name}: closure did not converge within {depth_bound} sweeps")

    return ClosureResult(
        states=tuple(states),
        messages=tuple(messages),
        transitions=tuple(transitions),
        sweeps=sweeps,
        converged=converged,
        history=tuple(history),
        pruned=len(pruned),
    )


def is_valid_trace(vlsm: VlsmDefinition, trace: Trace, depth_bound: int,
                   closure: Optional[ClosureResult] = None) -> Validity:
    """
    Check that a constrained trace only consumes closure-valid messages

    A missing input in a converged closure makes the trace INVALID; in a
    closure cut off by the bound the answer is INDETERMINATE. Found inputs
    are valid regardless of convergence since the closure only grows.
    """
    if not is_constrained_trace(vlsm, trace):
        return Validity.INVALID
    inputs = [record.input for record in trace.records if record.input is not NO_MESSAGE]
    if not inputs:
        return Validity.VALID
    if closure is None:
        closure = valid_closure(vlsm, depth_bound)
    if all(message in closure.message_set for message in inputs):
        return Validity.VALID
    return Validity.INVALID if closure.converged else Validity.INDETERMINATE


def restrict(vlsm: VlsmDefinition, allowed: Callable[[Label], bool],
             name: Optional[str] = None) -> VlsmDefinition:
    """Return vlsm with transitions limited to the labels allowed accepts"""
    def valid(label: Label, state: State, message: OptionalMessage) -> bool:
        return allowed(label) and vlsm.valid(label, state, message)

    return replace(
        vlsm,
        name=name or f"{vlsm.name}|restricted",
        labels=tuple(label for label in vlsm.labels if allowed(label)),
        valid=valid,
    )
