"""
Rounds Protocol

Each child is a VLSM over its observation set, its perceived round and its
epistemic status. Children broadcast <sender, round, status> messages and
advance their round according to the receive table below. The composition
constraint checks that initial observations are consistent and forbids
equivocation on receive. An optional jump transition lets an undecided child
skip straight to the round preceding the number of muddy children it sees.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterator, Optional, Sequence, Tuple, Union

from ..errors import DomainError
from ..vlsm.composition import (FREE, CompositeLabel, CompositeState,
                                CompositionConstraint, compose, no_equivocation)
from ..vlsm.core import NO_MESSAGE, OptionalMessage, VlsmDefinition
from .models import (EMIT, INIT, JUMP, RECEIVE, InitialState, PuzzleInstance,
                     Status, format_obs, initial_state)

logger = logging.getLogger(__name__)

MESSAGE_DOMAIN = "round-messages"


@dataclass(frozen=True)
class RoundState:
    """Running child state <Obs, r, status>"""
    obs: FrozenSet[int]
    round: int
    status: Status

    def __post_init__(self):
        if not isinstance(self.round, int) or self.round < 0:
            raise DomainError(f"Round must be a natural number, got {self.round!r}")

    @property
    def running(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"<{format_obs(self.obs)}, {self.round}, {self.status}>"


RoundChildState = Union[InitialState, RoundState]


@dataclass(frozen=True)
class RoundMessage:
    """Message <sender, r, status>"""
    sender: int
    round: int
    status: Status

    def __post_init__(self):
        if not isinstance(self.sender, int) or self.sender < 1:
            raise DomainError(f"Sender must be a child index, got {self.sender!r}")
        if not isinstance(self.round, int) or self.round < 0:
            raise DomainError(f"Round must be a natural number, got {self.round!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {"sender": self.sender, "round": self.round, "status": self.status.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RoundMessage":
        try:
            return cls(int(data["sender"]), int(data["round"]), Status(data["status"]))
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed round message {data!r}: {e}") from e

    def __repr__(self) -> str:
        return f"<{self.sender}, {self.round}, {self.status}>"


def step_init(state: InitialState) -> RoundState:
    """Start at round 0; a child seeing no muddy child knows it is muddy"""
    if not isinstance(state, InitialState):
        raise DomainError(f"init applies to initial states only, got {state!r}")
    status = Status.UNKNOWN if state.obs else Status.MUDDY
    return RoundState(state.obs, 0, status)


def step_emit(state: RoundState, i: int) -> Tuple[RoundState, RoundMessage]:
    """Broadcast the current round and status; the state is unchanged"""
    if not isinstance(state, RoundState):
        raise DomainError(f"emit applies to running states only, got {state!r}")
    return state, RoundMessage(i, state.round, state.status)


def step_receive(state: RoundState, message: RoundMessage) -> Optional[RoundState]:
    """
    Receive table for one child

    Returns the successor state, the unchanged state for the cases that
    leave it as is, or None for every combination the table does not treat.
    """
    if state.status.final:
        return state

    size = len(state.obs)
    seen = message.sender in state.obs
    r, received = state.round, message.round

    if message.status is Status.CLEAN:
        if not seen and received == size:
            return RoundState(state.obs, received, Status.CLEAN)
        if not seen and received == size + 1:
            return RoundState(state.obs, received - 1, Status.MUDDY)
        return None

    if message.status is Status.MUDDY:
        if seen and received == size:
            return RoundState(state.obs, received, Status.MUDDY)
        if seen and received == size - 1:
            return RoundState(state.obs, received + 1, Status.CLEAN)
        return None

    if seen:
        if received < r:
            return state
        if r <= received < size - 1:
            return RoundState(state.obs, received + 1, Status.UNKNOWN)
        if received == size - 1:
            return RoundState(state.obs, received + 1, Status.MUDDY)
        return None

    if received <= r:
        return state
    if r < received < size:
        return RoundState(state.obs, received, Status.UNKNOWN)
    if received == size:
        return RoundState(state.obs, received, Status.MUDDY)
    return None


def step_jump(state: RoundState) -> Optional[RoundState]:
    """Skip to round |Obs| - 1 while undecided and behind it"""
    if not isinstance(state, RoundState) or state.status is not Status.UNKNOWN:
        return None
    target = len(state.obs) - 1
    if state.round >= target:
        return None
    return RoundState(state.obs, target, Status.UNKNOWN)


def make_child(i: int, n: int, with_jump: bool = True) -> VlsmDefinition:
    """
    Build the VLSM of child i among n children

    Args:
        i: Child index in 1..n
        n: Number of children
        with_jump: Whether the jump label is part of the machine

    Returns:
        VlsmDefinition with labels init/emit/receive[/jump] and M0 empty
    """
    if not 1 <= i <= n:
        raise DomainError(f"Child index {i} outside 1..{n}")
    others = tuple(k for k in range(1, n + 1) if k != i)
    others_set = frozenset(others)

    def is_state(state: Any) -> bool:
        if not isinstance(state, (InitialState, RoundState)):
            return False
        return isinstance(state.obs, frozenset) and state.obs <= others_set

    def is_initial(state: Any) -> bool:
        return isinstance(state, InitialState) and is_state(state)

    def initial_states() -> Iterator[InitialState]:
        for size in range(len(others) + 1):
            for obs in itertools.combinations(others, size):
                yield InitialState(frozenset(obs))

    def is_message(message: Any) -> bool:
        return isinstance(message, RoundMessage) and 1 <= message.sender <= n

    def transition(label: str, state: RoundChildState,
                   message: OptionalMessage) -> Tuple[RoundChildState, OptionalMessage]:
        if label == INIT and isinstance(state, InitialState):
            return step_init(state), NO_MESSAGE
        if label == EMIT and isinstance(state, RoundState):
            return step_emit(state, i)
        if label == RECEIVE and isinstance(state, RoundState) and isinstance(message, RoundMessage):
            return step_receive(state, message) or state, NO_MESSAGE
        if label == JUMP and isinstance(state, RoundState):
            return step_jump(state) or state, NO_MESSAGE
        return state, NO_MESSAGE

    def valid(label: str, state: RoundChildState, message: OptionalMessage) -> bool:
        if label == INIT:
            return isinstance(state, InitialState) and message is NO_MESSAGE
        if label == EMIT:
            return isinstance(state, RoundState) and message is NO_MESSAGE
        if label == RECEIVE:
            return (isinstance(state, RoundState) and is_message(message)
                    and step_receive(state, message) is not None)
        if label == JUMP:
            return (with_jump and isinstance(state, RoundState) and message is NO_MESSAGE
                    and step_jump(state) is not None)
        return False

    labels = (INIT, EMIT, RECEIVE, JUMP) if with_jump else (INIT, EMIT, RECEIVE)
    return VlsmDefinition(
        name=f"child{i}",
        labels=labels,
        is_state=is_state,
        is_initial=is_initial,
        initial_states=initial_states,
        is_message=is_message,
        transition=transition,
        valid=valid,
        message_domain=MESSAGE_DOMAIN,
        message_labels=frozenset({RECEIVE}),
    )


def consistent(states: Sequence[Any]) -> bool:
    """
    Every child sees exactly the muddy children other than itself

    With two or more children the muddy set is the union of the observations
    and must be non-empty; a lone child seeing nobody is muddy itself.
    """
    observed = [child.obs for child in states]
    muddy = frozenset().union(*observed)
    if not muddy:
        return len(observed) == 1
    return all(obs == muddy - {i} for i, obs in enumerate(observed, start=1))


def round_emittable(sender: int, state: Any, message: RoundMessage) -> bool:
    """Closed-form emission test: current state, or an earlier undecided round"""
    if not isinstance(state, RoundState) or not isinstance(message, RoundMessage):
        return False
    if message.status is state.status and message.round == state.round:
        return True
    return message.status is Status.UNKNOWN and message.round < state.round


def phi_rounds(label: CompositeLabel, state: CompositeState, message: OptionalMessage) -> bool:
    """Composition constraint: consistent init, no equivocation on receive"""
    if label.label == INIT:
        return consistent(state.components)
    if label.label == RECEIVE:
        if not isinstance(message, RoundMessage) or not 1 <= message.sender <= len(state):
            return False
        return no_equivocation(state, message, round_emittable)
    return True


def round_candidates(label: CompositeLabel, state: CompositeState) -> Iterator[RoundMessage]:
    """Every message phi_rounds could accept on a receive in state"""
    if label.label != RECEIVE:
        return
    for j, sender in enumerate(state, start=1):
        if not isinstance(sender, RoundState):
            continue
        yield RoundMessage(j, sender.round, sender.status)
        for earlier in range(sender.round):
            yield RoundMessage(j, earlier, Status.UNKNOWN)


ROUNDS_CONSTRAINT = CompositionConstraint("phi_rounds", phi_rounds, round_candidates)


def build_puzzle(instance: PuzzleInstance, with_jump: bool = False,
                 constrained: bool = True) -> VlsmDefinition:
    """
    Compose the n children of an instance

    Args:
        instance: Puzzle instance
        with_jump: Enable jump transitions
        constrained: Use phi_rounds; False gives the free composition

    Returns:
        Composite VlsmDefinition seeded with the designated initial state
    """
    children = [make_child(i, instance.n, with_jump) for i in instance.children]
    constraint = ROUNDS_CONSTRAINT if constrained else FREE
    variant = "rounds+jump" if with_jump else "rounds"
    logger.debug(f"Building {variant} puzzle for {instance} (constrained={constrained})")
    return compose(children, constraint, name=f"{variant}[{instance}]",
                   seeds=(initial_state(instance),))


def round_of(state: Any) -> int:
    """Perceived round of a child; -1 before init"""
    return state.round if isinstance(state, RoundState) else -1
