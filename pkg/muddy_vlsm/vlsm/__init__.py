"""
VLSM Module

Validating labelled state transition and message production systems:
single machines, bounded valid-message closure and constrained composition.
"""

from .core import (
    NO_MESSAGE,
    ClosureResult,
    Trace,
    TransitionRecord,
    Validity,
    VlsmDefinition,
    apply_transition,
    is_constrained_trace,
    is_valid_trace,
    restrict,
    valid_closure,
)

from .composition import (
    FREE,
    CompositeLabel,
    CompositeState,
    CompositionConstraint,
    bounded_emittable,
    compose,
    no_equivocation,
)

__all__ = [
    # Core
    "NO_MESSAGE",
    "ClosureResult",
    "Trace",
    "TransitionRecord",
    "Validity",
    "VlsmDefinition",
    "apply_transition",
    "is_constrained_trace",
    "is_valid_trace",
    "restrict",
    "valid_closure",

    # Composition
    "FREE",
    "CompositeLabel",
    "CompositeState",
    "CompositionConstraint",
    "bounded_emittable",
    "compose",
    "no_equivocation",
]
