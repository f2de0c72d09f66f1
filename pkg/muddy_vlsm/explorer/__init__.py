"""
Explorer Module

Bounded exhaustive exploration of composed puzzles, property checks,
scenario replay and the command line.
"""

from .models import ExplorationConfig, ModelKind, PropertyVerdict, ReachabilityReport, Scenario
from .exploration import Exploration, explore, run_exploration
from .scenario import ReplayResult, load_scenario, replay

__all__ = [
    "ExplorationConfig",
    "ModelKind",
    "PropertyVerdict",
    "ReachabilityReport",
    "Scenario",
    "Exploration",
    "explore",
    "run_exploration",
    "ReplayResult",
    "load_scenario",
    "replay",
]
