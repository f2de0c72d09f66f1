"""
VLSM Composition

Indexed composition of VLSMs over a shared message domain, filtered by a
composition constraint, plus the generic no-equivocation predicate and a
bounded-search emission test for machines without a closed form.

Component indices are 1-based: component i of the family is at position i
of every composite state.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence, Tuple

from ..errors import ConstructionError, DomainError
from .core import (NO_MESSAGE, Label, OptionalMessage, State, VlsmDefinition,
                   apply_transition)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompositeLabel:
    """Label of a composite transition: (component index, local label)"""
    index: int
    label: Label

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise DomainError(f"Component index must be a positive integer, got {self.index!r}")

    def __str__(self) -> str:
        return f"{self.index}:{self.label}"


@dataclass(frozen=True)
class CompositeState:
    """Product state; position i holds the state of component i"""
    components: Tuple[State, ...]

    def component(self, index: int) -> State:
        if not 1 <= index <= len(self.components):
            raise DomainError(f"Component index {index} outside 1..{len(self.components)}")
        return self.components[index - 1]

    def replace(self, index: int, state: State) -> "CompositeState":
        if not 1 <= index <= len(self.components):
            raise DomainError(f"Component index {index} outside 1..{len(self.components)}")
        parts = list(self.components)
        parts[index - 1] = state
        return CompositeState(tuple(parts))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[State]:
        return iter(self.components)


ConstraintPredicate = Callable[[CompositeLabel, CompositeState, OptionalMessage], bool]


@dataclass(frozen=True)
class CompositionConstraint:
    """
    Composition constraint phi

    Attributes:
        name: Name shown in reports
        predicate: phi(label, composite state, message)
        candidates: Optional generator of every message phi could accept for
            (label, state); used to steer closure enumeration
    """
    name: str
    predicate: ConstraintPredicate
    candidates: Optional[Callable[[CompositeLabel, CompositeState], Iterable[OptionalMessage]]] = None

    def __call__(self, label: CompositeLabel, state: CompositeState,
                 message: OptionalMessage) -> bool:
        return bool(self.predicate(label, state, message))


FREE = CompositionConstraint("free", lambda label, state, message: True)


def compose(components: Sequence[VlsmDefinition],
            constraint: CompositionConstraint = FREE,
            name: Optional[str] = None,
            seeds: Optional[Tuple[CompositeState, ...]] = None) -> VlsmDefinition:
    """
    Compose a family of VLSMs under a composition constraint

    Args:
        components: Component machines, component i at position i - 1
        constraint: Composition constraint, consulted on every transition
        name: Name of the composite machine
        seeds: Designated initial composite states

    Returns:
        The composite VlsmDefinition

    Raises:
        ConstructionError: if the family is empty or message domains differ
    """
    family = tuple(components)
    if not family:
        raise ConstructionError("Cannot compose an empty family of VLSMs")
    domains = sorted({component.message_domain for component in family})
    if len(domains) > 1:
        raise ConstructionError(f"Components do not share one message domain: {domains}")
    size = len(family)

    labels = tuple(CompositeLabel(index, label)
                   for index, component in enumerate(family, start=1)
                   for label in component.labels)

    def is_state(state: Any) -> bool:
        return (isinstance(state, CompositeState) and len(state) == size
                and all(component.is_state(part) for component, part in zip(family, state)))

    def is_initial(state: Any) -> bool:
        return is_state(state) and all(component.is_initial(part)
                                       for component, part in zip(family, state))

    def initial_states() -> Iterator[CompositeState]:
        pools = [tuple(component.initial_states()) for component in family]
        for combination in itertools.product(*pools):
            yield CompositeState(tuple(combination))

    def is_message(message: Any) -> bool:
        return any(component.is_message(message) for component in family)

    def transition(label: CompositeLabel, state: CompositeState,
                   message: OptionalMessage) -> Tuple[CompositeState, OptionalMessage]:
        component = family[label.index - 1]
        destination, output = component.transition(label.label, state.component(label.index), message)
        return state.replace(label.index, destination), output

    def valid(label: Any, state: CompositeState, message: OptionalMessage) -> bool:
        if not isinstance(label, CompositeLabel) or not 1 <= label.index <= size:
            return False
        component = family[label.index - 1]
        if label.label not in component.labels:
            return False
        return (component.valid(label.label, state.component(label.index), message)
                and constraint(label, state, message))

    message_labels = None
    if any(component.message_labels is not None for component in family):
        message_labels = frozenset(
            CompositeLabel(index, label)
            for index, component in enumerate(family, start=1)
            for label in component.labels if component.accepts_messages(label))

    candidate_inputs = None
    if constraint.candidates is not None:
        candidate_inputs = constraint.candidates
    elif all(component.candidate_inputs is not None for component in family):
        def candidate_inputs(label: CompositeLabel, state: CompositeState) -> Iterable[OptionalMessage]:
            component = family[label.index - 1]
            return component.candidate_inputs(label.label, state.component(label.index))

    initial_messages = tuple(dict.fromkeys(
        message for component in family for message in component.initial_messages))

    composite_name = name or "+".join(component.name for component in family)
    if constraint is not FREE:
        composite_name = f"({composite_name})|{constraint.name}"
    logger.debug(f"Composed {size} components as {composite_name}")

    return VlsmDefinition(
        name=composite_name,
        labels=labels,
        is_state=is_state,
        is_initial=is_initial,
        initial_states=initial_states,
        is_message=is_message,
        transition=transition,
        valid=valid,
        initial_messages=initial_messages,
        message_domain=domains[0],
        message_labels=message_labels,
        candidate_inputs=candidate_inputs,
        seeds=seeds,
    )


EmissionTest = Callable[[int, State, OptionalMessage], bool]


def message_sender(message: OptionalMessage) -> int:
    """Return the sender index carried by a message"""
    sender = getattr(message, "sender", None)
    if not isinstance(sender, int) or isinstance(sender, bool):
        raise DomainError(f"Message {message!r} carries no sender component")
    return sender


def no_equivocation(state: CompositeState, message: OptionalMessage,
                    emittable: EmissionTest) -> bool:
    """
    True iff the sender could have emitted message on a trace to its state

    Args:
        state: Current composite state
        message: Message carrying a `sender` component index
        emittable: Emission test (sender, sender's current state, message)

    Raises:
        DomainError: if the message has no identifiable sender
    """
    sender = message_sender(message)
    if not 1 <= sender <= len(state):
        return False
    return bool(emittable(sender, state.component(sender), message))


def bounded_emittable(component: VlsmDefinition, messages: Iterable[OptionalMessage],
                      bound: int) -> EmissionTest:
    """
    Build an emission test by bounded search over one component's traces

    The test accepts (sender, target, m) when some constrained trace of at
    most `bound` transitions, starting in S0 and consuming inputs drawn from
    `messages`, outputs m and afterwards arrives in target.
    """
    pool = (NO_MESSAGE,) + tuple(m for m in dict.fromkeys(messages) if m is not NO_MESSAGE)

    def emittable(sender: int, target: State, message: OptionalMessage) -> bool:
        frontier = [(state, False) for state in component.initial_states()]
        seen = set(frontier)
        for depth in range(bound + 1):
            if any(emitted and state == target for state, emitted in frontier):
                return True
            if depth == bound:
                break
            successors = []
            for state, emitted in frontier:
                for label in component.labels:
                    for candidate in pool:
                        if candidate is not NO_MESSAGE and not component.accepts_messages(label):
                            continue
                        record = apply_transition(component, label, state, candidate)
                        if record is None:
                            continue
                        key = (record.destination, emitted or record.output == message)
                        if key not in seen:
                            seen.add(key)
                            successors.append(key)
            if not successors:
                break
            frontier = successors
        return False

    return emittable
