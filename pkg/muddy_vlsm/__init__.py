"""
Muddy Children VLSM Explorer

Models the asynchronous Muddy Children puzzle as composed validating
labelled state machines and checks its protocols exhaustively at small
sizes against the synchronous epistemic solution.

Features:
- VLSM core: constrained and valid traces, bounded valid-message closure
- Composition under constraints with no-equivocation checks
- Rounds protocol, with the optional jump shortcut, and history protocol
- Kripke oracle for the synchronous solution
- Property checks, replayable scenarios and a JSON-reporting command line
"""

__version__ = "1.0.0"
__author__ = "Muddy VLSM Team"

from .errors import ConfigError, ConstructionError, DomainError, ReplayError, VlsmError
from .explorer import ExplorationConfig, ModelKind, explore, load_scenario, replay
from .puzzle import PuzzleInstance, Status, build_puzzle, build_puzzle3, sync_rounds
from .vlsm import compose, valid_closure

__all__ = [
    # Errors
    "VlsmError",
    "DomainError",
    "ConstructionError",
    "ConfigError",
    "ReplayError",

    # Core API
    "compose",
    "valid_closure",
    "PuzzleInstance",
    "Status",
    "build_puzzle",
    "build_puzzle3",
    "sync_rounds",
    "ExplorationConfig",
    "ModelKind",
    "explore",
    "load_scenario",
    "replay",

    # Package metadata
    "__version__",
    "__author__",
]
