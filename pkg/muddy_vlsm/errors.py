"""
Error Types

Exception hierarchy shared by the VLSM core, the puzzle protocols and the
explorer, plus the process exit codes the command line maps them to.
"""

from enum import IntEnum
from typing import Optional


class ExitCode(IntEnum):
    """Process exit codes"""
    OK = 0
    PROPERTY_FAILURE = 1
    USAGE = 2


class VlsmError(Exception):
    """Base class for all muddy_vlsm errors"""


class DomainError(VlsmError, ValueError):
    """A value lies outside the domain an operation is defined on"""


class ConstructionError(VlsmError, ValueError):
    """A machine, composition or instance cannot be built as requested"""


class ConfigError(VlsmError, ValueError):
    """Invalid exploration config or settings file"""


class ReplayError(VlsmError):
    """
    A scenario step was rejected during replay

    Attributes:
        step_index: 0-based index of the rejected step
        label: label of the rejected step
        predicate: "component" (component validity), "constraint" (composition
            constraint) or "reference" (unresolvable message reference)
    """

    def __init__(self, step_index: int, label: str, predicate: str,
                 detail: Optional[str] = None):
        self.step_index = step_index
        self.label = label
        self.predicate = predicate
        self.detail = detail
        message = f"step {step_index} ({label}) rejected by {predicate}"
        if detail:
            message += f": {detail}"
        super().__init__(message)
