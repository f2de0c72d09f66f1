"""
Puzzle Data Models

Data structures shared by both asynchronous Muddy Children protocols:
epistemic status, the puzzle instance (ground truth), and the Initial
child state that only records what a child observes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Tuple

from ..errors import ConstructionError
from ..vlsm.composition import CompositeState


class Status(Enum):
    """Epistemic status of a child"""
    UNKNOWN = "u"
    MUDDY = "m"
    CLEAN = "c"

    @property
    def final(self) -> bool:
        """Decisions are final; only UNKNOWN can still change"""
        return self is not Status.UNKNOWN

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class InitialState:
    """
    Initial child state <Obs>

    Attributes:
        obs: Indices of the children this child sees as muddy
    """
    obs: FrozenSet[int]

    @property
    def running(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"<{format_obs(self.obs)}>"


@dataclass(frozen=True)
class PuzzleInstance:
    """
    One puzzle instance

    Attributes:
        n: Number of children
        muddy: Ground-truth set of muddy children (non-empty, within 1..n)
    """
    n: int
    muddy: FrozenSet[int]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ConstructionError(f"Child count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "muddy", frozenset(self.muddy))
        if not self.muddy:
            raise ConstructionError("At least one child must be muddy")
        outside = sorted(i for i in self.muddy if not 1 <= i <= self.n)
        if outside:
            raise ConstructionError(f"Muddy children {outside} outside 1..{self.n}")

    @classmethod
    def of(cls, n: int, muddy: Iterable[int]) -> "PuzzleInstance":
        return cls(n, frozenset(muddy))

    @property
    def N(self) -> int:
        """True number of muddy children"""
        return len(self.muddy)

    @property
    def children(self) -> range:
        return range(1, self.n + 1)

    def observation(self, i: int) -> FrozenSet[int]:
        """What child i sees: every muddy child except itself"""
        return self.muddy - {i}

    def is_muddy(self, i: int) -> bool:
        return i in self.muddy

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "muddy": sorted(self.muddy)}

    def __str__(self) -> str:
        return f"n={self.n}, muddy={format_obs(self.muddy)}"


def format_obs(obs: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(obs)) + "}"


def all_instances(n: int) -> Tuple[PuzzleInstance, ...]:
    """Every consistent instance with n children, smallest muddy sets first"""
    instances = []
    for mask in range(1, 2 ** n):
        muddy = frozenset(i + 1 for i in range(n) if mask >> i & 1)
        instances.append(PuzzleInstance(n, muddy))
    return tuple(sorted(instances, key=lambda inst: (len(inst.muddy), sorted(inst.muddy))))


INIT = "init"
EMIT = "emit"
RECEIVE = "receive"
JUMP = "jump"

LABEL_NAMES = (INIT, EMIT, RECEIVE, JUMP)


def initial_state(instance: PuzzleInstance) -> CompositeState:
    """Designated initial composite state: child i observes Muddy \\ {i}"""
    return CompositeState(tuple(InitialState(instance.observation(i)) for i in instance.children))


def is_final(state: Iterable[Any]) -> bool:
    """A composite state is final when every child runs with a decided status"""
    return all(getattr(child, "running", False) and child.status.final for child in state)
