"""
Kripke Oracle

Ground truth for the classical synchronous puzzle: the Kripke structure
over all 2^n muddiness assignments, and the round-by-round public
announcement solution used to validate protocol outcomes.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..errors import DomainError
from .models import Status

logger = logging.getLogger(__name__)

MAX_CHILDREN = 10

World = Tuple[int, ...]


@dataclass(frozen=True)
class Assignment:
    """Ground-truth muddiness: bits[i - 1] == 1 iff child i is muddy"""
    bits: World

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(self.bits))
        if not self.bits or any(bit not in (0, 1) for bit in self.bits):
            raise DomainError(f"Assignment must be a non-empty binary tuple, got {self.bits!r}")

    @classmethod
    def from_muddy(cls, n: int, muddy: Iterable[int]) -> "Assignment":
        muddy = frozenset(muddy)
        outside = sorted(i for i in muddy if not 1 <= i <= n)
        if outside:
            raise DomainError(f"Muddy children {outside} outside 1..{n}")
        return cls(tuple(1 if i in muddy else 0 for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def muddy(self) -> FrozenSet[int]:
        return frozenset(i for i, bit in enumerate(self.bits, start=1) if bit)


def flip(world: World, i: int) -> World:
    """The world child i cannot tell apart from world"""
    return world[:i - 1] + (1 - world[i - 1],) + world[i:]


@dataclass(frozen=True)
class KripkeModel:
    """
    Epistemic model of the puzzle

    Attributes:
        n: Number of children
        worlds: All binary n-tuples
        relations: K_i for i in 1..n, pairs of worlds equal outside component i
        valuation: Worlds satisfying each atom p_1..p_n and p
    """
    n: int
    worlds: Tuple[World, ...]
    relations: Dict[int, FrozenSet[Tuple[World, World]]]
    valuation: Dict[str, FrozenSet[World]]

    def accessible(self, i: int, s: World, t: World) -> bool:
        return (s, t) in self.relations[i]

    def satisfies(self, world: World, atom: str) -> bool:
        if atom not in self.valuation:
            raise DomainError(f"Unknown atom {atom!r}")
        return world in self.valuation[atom]

    def classes(self, i: int) -> List[FrozenSet[World]]:
        """Equivalence classes of K_i in world order"""
        seen = set()
        result = []
        for world in self.worlds:
            if world in seen:
                continue
            cls = frozenset(t for t in (world, flip(world, i)) if (world, t) in self.relations[i])
            seen.update(cls)
            result.append(cls)
        return result


def build_kripke(n: int) -> KripkeModel:
    """Enumerate the model for n children (1 <= n <= 10)"""
    if not isinstance(n, int) or not 1 <= n <= MAX_CHILDREN:
        raise DomainError(f"Kripke model supports 1..{MAX_CHILDREN} children, got {n!r}")
    worlds = tuple(itertools.product((0, 1), repeat=n))
    relations = {
        i: frozenset((w, t) for w in worlds for t in (w, flip(w, i)))
        for i in range(1, n + 1)
    }
    valuation = {f"p_{i}": frozenset(w for w in worlds if w[i - 1]) for i in range(1, n + 1)}
    valuation["p"] = frozenset(w for w in worlds if any(w))
    return KripkeModel(n, worlds, relations, valuation)


def knows_own_status(model: KripkeModel, worlds: FrozenSet[World], world: World, i: int) -> bool:
    """In world, does child i know x_i given the surviving worlds?"""
    return not any(t in worlds and t[i - 1] != world[i - 1]
                   for t in (flip(world, i),) if model.accessible(i, world, t))


def known_status(model: KripkeModel, worlds: FrozenSet[World], world: World, i: int) -> Optional[Status]:
    """Child i's status as settled by the surviving worlds it considers possible, or None"""
    values = {t[i - 1] for t in (world, flip(world, i))
              if t in worlds and model.accessible(i, world, t)}
    if len(values) != 1:
        return None
    return Status.MUDDY if values.pop() else Status.CLEAN


def answers(model: KripkeModel, worlds: FrozenSet[World], world: World) -> Tuple[bool, ...]:
    return tuple(knows_own_status(model, worlds, world, i) for i in range(1, model.n + 1))


def eliminate_unanimous_no(model: KripkeModel, worlds: FrozenSet[World]) -> FrozenSet[World]:
    """Keep the worlds in which every child would answer No"""
    return frozenset(w for w in worlds if not any(answers(model, worlds, w)))


def no_rounds(model: KripkeModel, k: int) -> FrozenSet[World]:
    """Worlds surviving the announcement of p followed by k unanimous-No rounds"""
    worlds = model.valuation["p"]
    for _ in range(k):
        worlds = eliminate_unanimous_no(model, worlds)
    return worlds


@dataclass(frozen=True)
class SyncSolution:
    """
    Outcome of the synchronous solution

    Attributes:
        assignment: Ground truth
        rounds_to_yes: 1-indexed round in which each child first knows its status
        final: Status each child reads off the surviving worlds when it first answers Yes
        transcript: Per round, whether each child answered Yes
    """
    assignment: Assignment
    rounds_to_yes: Tuple[int, ...]
    final: Tuple[Status, ...]
    transcript: Tuple[Tuple[bool, ...], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.assignment.n,
            "muddy": sorted(self.assignment.muddy),
            "rounds_to_yes": list(self.rounds_to_yes),
            "final": [status.value for status in self.final],
            "transcript": [["yes" if said else "no" for said in row] for row in self.transcript],
        }


def sync_rounds(x: Assignment, model: Optional[KripkeModel] = None) -> SyncSolution:
    """
    Run the synchronous solution after the announcement of p

    Each round every child publicly answers whether it knows its status,
    and worlds predicting different answers are eliminated. Muddy children
    answer Yes in round |Muddy|, clean ones a round later.

    Raises:
        DomainError: if no child is muddy
    """
    if not any(x.bits):
        raise DomainError("At least one child must be muddy for the announcement to hold")
    model = model or build_kripke(x.n)
    if model.n != x.n:
        raise DomainError(f"Model has {model.n} children, assignment {x.n}")

    worlds = model.valuation["p"]
    rounds_to_yes: List[Optional[int]] = [None] * x.n
    final: List[Optional[Status]] = [None] * x.n
    transcript = []
    current = 0
    while any(r is None for r in rounds_to_yes):
        current += 1
        if current > x.n + 1:
            raise RuntimeError(f"Synchronous solution did not settle for {x.bits}")
        said = answers(model, worlds, x.bits)
        transcript.append(said)
        for index, yes in enumerate(said):
            if yes and rounds_to_yes[index] is None:
                rounds_to_yes[index] = current
                final[index] = known_status(model, worlds, x.bits, index + 1)
        worlds = frozenset(w for w in worlds if answers(model, worlds, w) == said)

    if any(status is None for status in final):
        raise RuntimeError(f"Surviving worlds do not settle every status for {x.bits}")
    logger.debug(f"Synchronous solution for {x.bits}: rounds {rounds_to_yes}")
    return SyncSolution(x, tuple(rounds_to_yes), tuple(final), tuple(transcript))


def expected_status(x: Assignment, i: int) -> Status:
    if not 1 <= i <= x.n:
        raise DomainError(f"Child index {i} outside 1..{x.n}")
    return Status.MUDDY if x.bits[i - 1] else Status.CLEAN
