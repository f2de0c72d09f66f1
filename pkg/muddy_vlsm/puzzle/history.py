"""
History Protocol

Children exchange their received-message histories instead of round
numbers. A child's status is recomputed after each receive from the
flattened history: the distinct undecided messages of every child it sees
(grouped relative to the receiver) and the set of children known muddy.

Only the three-child composition is supported; the grouping of similar
messages was designed for exactly three children.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, Iterator, Optional, Sequence, Tuple, Union

from ..errors import ConstructionError, DomainError
from ..vlsm.composition import (FREE, CompositeLabel, CompositeState,
                                CompositionConstraint, compose, no_equivocation)
from ..vlsm.core import NO_MESSAGE, OptionalMessage, VlsmDefinition
from .models import (EMIT, INIT, RECEIVE, InitialState, PuzzleInstance, Status,
                     format_obs, initial_state)
from .rounds import consistent

logger = logging.getLogger(__name__)

MESSAGE_DOMAIN = "history-messages"
SUPPORTED_CHILDREN = 3


@dataclass(frozen=True)
class HistoryMessage:
    """Recursive message <sender, status, history>"""
    sender: int
    status: Status
    history: Tuple["HistoryMessage", ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.sender, int) or self.sender < 1:
            raise DomainError(f"Sender must be a child index, got {self.sender!r}")
        object.__setattr__(self, "history", tuple(self.history))
        object.__setattr__(self, "_hash", hash((self.sender, self.status, self.history)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def depth(self) -> int:
        """Nesting depth; 1 for a message with an empty history"""
        return 1 + max((m.depth for m in self.history), default=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sender": self.sender,
            "status": self.status.value,
            "history": [m.to_dict() for m in self.history],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HistoryMessage":
        try:
            history = tuple(cls.from_dict(item) for item in data.get("history", []))
            return cls(int(data["sender"]), Status(data["status"]), history)
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise DomainError(f"Malformed history message {data!r}: {e}") from e

    def __repr__(self) -> str:
        inner = ", ".join(repr(m) for m in self.history)
        return f"<{self.sender}, {self.status}, [{inner}]>"


@dataclass(frozen=True)
class HistoryState:
    """Running child state <Obs, status, history>"""
    obs: FrozenSet[int]
    status: Status
    history: Tuple[HistoryMessage, ...] = ()

    @property
    def running(self) -> bool:
        return True

    def __repr__(self) -> str:
        inner = ", ".join(repr(m) for m in self.history)
        return f"<{format_obs(self.obs)}, {self.status}, [{inner}]>"


HistoryChildState = Union[InitialState, HistoryState]
History = Sequence[HistoryMessage]


def is_strict_prefix(prefix: History, history: History) -> bool:
    return len(prefix) < len(history) and tuple(history[:len(prefix)]) == tuple(prefix)


def extra(message: HistoryMessage) -> FrozenSet[HistoryMessage]:
    """Undecided messages the sender emitted at every strict prefix of its history"""
    return frozenset(HistoryMessage(message.sender, Status.UNKNOWN, message.history[:k])
                     for k in range(len(message.history)))


@lru_cache(maxsize=1 << 16)
def _flatten(history: Tuple[HistoryMessage, ...]) -> FrozenSet[HistoryMessage]:
    if not history:
        return frozenset()
    last = history[-1]
    return _flatten(history[:-1]) | _flatten(last.history) | {last} | extra(last)


def flatten(history: History) -> FrozenSet[HistoryMessage]:
    """Every message contained, at any depth, in history, plus their extras"""
    return _flatten(tuple(history))


def unknown_k(k: int, messages: Iterable[HistoryMessage]) -> FrozenSet[HistoryMessage]:
    return frozenset(m for m in messages if m.sender == k and m.status is Status.UNKNOWN)


def group_similar(i: int, messages: Iterable[HistoryMessage]) -> FrozenSet[HistoryMessage]:
    """Drop undecided messages whose history ends with a message from i"""
    return frozenset(
        m for m in messages
        if not (m.status is Status.UNKNOWN and m.history and m.history[-1].sender == i))


def muddy_set(messages: Iterable[HistoryMessage]) -> FrozenSet[int]:
    return frozenset(m.sender for m in messages if m.status is Status.MUDDY)


def compute_status(i: int, obs: FrozenSet[int], history: History) -> Status:
    """
    Status of child i after receiving history

    Muddy when every seen child has sent at least |Obs| distinct undecided
    messages not echoing i; otherwise clean when |Obs| children are known
    muddy; otherwise unknown.
    """
    if not obs:
        raise DomainError("compute_status needs a non-empty observation set")
    flat = flatten(history)
    fewest = min(len(group_similar(i, unknown_k(k, flat))) for k in sorted(obs))
    if fewest >= len(obs):
        return Status.MUDDY
    if len(muddy_set(flat)) == len(obs):
        return Status.CLEAN
    return Status.UNKNOWN


def step_init(state: InitialState) -> HistoryState:
    if not isinstance(state, InitialState):
        raise DomainError(f"init applies to initial states only, got {state!r}")
    return HistoryState(state.obs, Status.UNKNOWN if state.obs else Status.MUDDY, ())


def step_emit(state: HistoryState, i: int) -> Tuple[HistoryState, HistoryMessage]:
    if not isinstance(state, HistoryState):
        raise DomainError(f"emit applies to running states only, got {state!r}")
    return state, HistoryMessage(i, state.status, state.history)


def step_receive(state: HistoryState, i: int, message: HistoryMessage) -> HistoryState:
    """Append the message and recompute; decided children ignore messages"""
    if state.status.final:
        return state
    history = state.history + (message,)
    return HistoryState(state.obs, compute_status(i, state.obs, history), history)


def make_history_child(i: int, n: int) -> VlsmDefinition:
    """Build the history-model VLSM of child i among n children; it never receives its own messages"""
    if not 1 <= i <= n:
        raise DomainError(f"Child index {i} outside 1..{n}")
    others = tuple(k for k in range(1, n + 1) if k != i)
    others_set = frozenset(others)

    def is_state(state: Any) -> bool:
        if not isinstance(state, (InitialState, HistoryState)):
            return False
        return isinstance(state.obs, frozenset) and state.obs <= others_set

    def initial_states() -> Iterator[InitialState]:
        for size in range(len(others) + 1):
            for obs in itertools.combinations(others, size):
                yield InitialState(frozenset(obs))

    def is_message(message: Any) -> bool:
        return isinstance(message, HistoryMessage) and 1 <= message.sender <= n

    def transition(label: str, state: HistoryChildState,
                   message: OptionalMessage) -> Tuple[HistoryChildState, OptionalMessage]:
        if label == INIT and isinstance(state, InitialState):
            return step_init(state), NO_MESSAGE
        if label == EMIT and isinstance(state, HistoryState):
            return step_emit(state, i)
        if label == RECEIVE and isinstance(state, HistoryState) and is_message(message):
            return step_receive(state, i, message), NO_MESSAGE
        return state, NO_MESSAGE

    def valid(label: str, state: HistoryChildState, message: OptionalMessage) -> bool:
        if label == INIT:
            return isinstance(state, InitialState) and message is NO_MESSAGE
        if label == EMIT:
            return isinstance(state, HistoryState) and message is NO_MESSAGE
        if label == RECEIVE:
            return (isinstance(state, HistoryState) and is_message(message)
                    and message.sender != i)
        return False

    return VlsmDefinition(
        name=f"child{i}",
        labels=(INIT, EMIT, RECEIVE),
        is_state=is_state,
        is_initial=lambda state: isinstance(state, InitialState) and is_state(state),
        initial_states=initial_states,
        is_message=is_message,
        transition=transition,
        valid=valid,
        message_domain=MESSAGE_DOMAIN,
        message_labels=frozenset({RECEIVE}),
    )


def history_emittable(sender: int, state: Any, message: HistoryMessage) -> bool:
    """Current (status, history), or undecided at a strict prefix of it"""
    if not isinstance(state, HistoryState) or not isinstance(message, HistoryMessage):
        return False
    if message.status is state.status and message.history == state.history:
        return True
    return message.status is Status.UNKNOWN and is_strict_prefix(message.history, state.history)


def phi_history(label: CompositeLabel, state: CompositeState, message: OptionalMessage) -> bool:
    if label.label == INIT:
        return consistent(state.components)
    if label.label == RECEIVE:
        if not isinstance(message, HistoryMessage) or not 1 <= message.sender <= len(state):
            return False
        return no_equivocation(state, message, history_emittable)
    return True


def history_candidates(label: CompositeLabel, state: CompositeState) -> Iterator[HistoryMessage]:
    if label.label != RECEIVE:
        return
    for j, sender in enumerate(state, start=1):
        if j == label.index or not isinstance(sender, HistoryState):
            continue
        yield HistoryMessage(j, sender.status, sender.history)
        for k in range(len(sender.history)):
            yield HistoryMessage(j, Status.UNKNOWN, sender.history[:k])


HISTORY_CONSTRAINT = CompositionConstraint("phi_history", phi_history, history_candidates)


def build_puzzle3(instance: PuzzleInstance, constrained: bool = True) -> VlsmDefinition:
    """
    Compose the three children of a history-model instance

    Raises:
        ConstructionError: for any instance without exactly three children
    """
    if instance.n != SUPPORTED_CHILDREN:
        raise ConstructionError(
            f"The history model needs exactly {SUPPORTED_CHILDREN} children, got {instance.n}: "
            "group_similar was engineered for three children and does not scale "
            "to more children as-is")
    children = [make_history_child(i, instance.n) for i in instance.children]
    constraint = HISTORY_CONSTRAINT if constrained else FREE
    return compose(children, constraint, name=f"history[{instance}]",
                   seeds=(initial_state(instance),))


def history_length(state: CompositeState) -> int:
    """Longest child history in a composite state"""
    return max((len(child.history) for child in state if isinstance(child, HistoryState)),
               default=0)


def history_cap(limit: Optional[int]):
    """Admit filter keeping composite states whose histories fit in limit"""
    if limit is None:
        return None

    def admit(state: CompositeState) -> bool:
        return history_length(state) <= limit

    return admit
