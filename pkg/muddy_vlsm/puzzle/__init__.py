"""
Puzzle Module

The Muddy Children puzzle: the rounds-based and history-based protocols as
composed VLSMs, the epistemic reading of history messages, and the
synchronous Kripke oracle they are validated against.
"""

from .models import PuzzleInstance, Status, all_instances, initial_state, is_final
from .rounds import RoundMessage, RoundState, build_puzzle, consistent, make_child, phi_rounds
from .history import (
    HistoryMessage,
    HistoryState,
    build_puzzle3,
    compute_status,
    flatten,
    make_history_child,
    phi_history,
)
from .formula import encode_formula, formula_size
from .oracle import Assignment, build_kripke, expected_status, sync_rounds

__all__ = [
    "PuzzleInstance",
    "Status",
    "all_instances",
    "initial_state",
    "is_final",

    # Rounds protocol
    "RoundMessage",
    "RoundState",
    "build_puzzle",
    "consistent",
    "make_child",
    "phi_rounds",

    # History protocol
    "HistoryMessage",
    "HistoryState",
    "build_puzzle3",
    "compute_status",
    "flatten",
    "make_history_child",
    "phi_history",
    "encode_formula",
    "formula_size",

    # Oracle
    "Assignment",
    "build_kripke",
    "expected_status",
    "sync_rounds",
]
