"""
Epistemic Formulas

Passive formula trees over knowledge operators K_j, conjunction, negation,
implication, atoms q_j ("j knows how many children are muddy") and the
constant T. encode_formula turns a history message into the formula
describing what its sender knew when sending it.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Set, Tuple

from .history import HistoryMessage
from .models import Status


class Formula:
    """Base class of formula nodes"""

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Top(Formula):
    def render(self) -> str:
        return "T"


@dataclass(frozen=True)
class Atom(Formula):
    agent: int

    def render(self) -> str:
        return f"q_{self.agent}"


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.operand,)

    def render(self) -> str:
        return f"~{self.operand.render()}"


@dataclass(frozen=True)
class And(Formula):
    operands: Tuple[Formula, ...]

    def children(self) -> Tuple[Formula, ...]:
        return self.operands

    def render(self) -> str:
        return "(" + " & ".join(op.render() for op in self.operands) + ")"


@dataclass(frozen=True)
class Implies(Formula):
    premise: Formula
    conclusion: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.premise, self.conclusion)

    def render(self) -> str:
        return f"({self.premise.render()} -> {self.conclusion.render()})"


@dataclass(frozen=True)
class Knows(Formula):
    agent: int
    operand: Formula

    def children(self) -> Tuple[Formula, ...]:
        return (self.operand,)

    def render(self) -> str:
        inner = self.operand.render()
        if not isinstance(self.operand, (And, Implies)):
            inner = f"({inner})"
        return f"K_{self.agent}{inner}"


TOP = Top()


def conjunction(formulas: Tuple[Formula, ...]) -> Formula:
    """Conjunction of formulas; T when empty"""
    if not formulas:
        return TOP
    if len(formulas) == 1:
        return formulas[0]
    return And(formulas)


@lru_cache(maxsize=4096)
def encode_formula(message: HistoryMessage) -> Formula:
    """
    Encode a history message <j, s, h>

    With B the conjunction of the encodings of h:
    K_j B & K_j(B -> q_j) when s is decided, K_j B & ~K_j(B -> q_j) otherwise.
    Encodings are shared per message, so repeated messages reuse one node.
    """
    body = conjunction(tuple(encode_formula(m) for m in message.history))
    knows_body = Knows(message.sender, body)
    knows_n = Knows(message.sender, Implies(body, Atom(message.sender)))
    if message.status is Status.UNKNOWN:
        return And((knows_body, Not(knows_n)))
    return And((knows_body, knows_n))


def formula_size(formula: Formula) -> int:
    """Number of distinct sub-formulas"""
    seen: Set[Formula] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(node.children())
    return len(seen)


def knowledge_depth(formula: Formula) -> int:
    """Maximum nesting of K operators"""
    below = max((knowledge_depth(child) for child in formula.children()), default=0)
    return below + 1 if isinstance(formula, Knows) else below
