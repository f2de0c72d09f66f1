#!/usr/bin/env python3
"""
VLSM Core Validation Test
Tests single-machine transitions, trace checks and the valid-message closure
"""

import pytest

from muddy_vlsm.errors import DomainError
from muddy_vlsm.puzzle.models import PuzzleInstance
from muddy_vlsm.puzzle.rounds import build_puzzle
from muddy_vlsm.vlsm.core import (NO_MESSAGE, NoMessage, Trace, TransitionRecord,
                                  Validity, VlsmDefinition, apply_transition,
                                  is_constrained_trace, is_valid_trace, restrict,
                                  valid_closure)


def counter_transition(label, state, message):
    if label == "inc":
        return state + 1, state + 1
    if label == "copy":
        return message, NO_MESSAGE
    return state, NO_MESSAGE


def counter_valid(label, state, message):
    if label == "inc":
        return message is NO_MESSAGE and state < 3
    if label == "copy":
        return isinstance(message, int) and message > state
    return False


@pytest.fixture
def counter():
    """Counts 0..3, emitting each new value; copy jumps to any larger received value"""
    return VlsmDefinition(
        name="counter",
        labels=("inc", "copy"),
        is_state=lambda s: isinstance(s, int) and 0 <= s <= 3,
        is_initial=lambda s: s == 0,
        initial_states=lambda: [0],
        is_message=lambda m: isinstance(m, int),
        transition=counter_transition,
        valid=counter_valid,
        message_labels=frozenset({"copy"}),
    )


def test_no_message_is_singleton():
    """The no-message marker is unique"""
    assert NoMessage() is NO_MESSAGE
    assert repr(NO_MESSAGE) == "NO_MESSAGE"


def test_definition_validation(counter):
    """Empty label sets, empty S0 and non-initial seeds are rejected"""
    with pytest.raises(DomainError):
        VlsmDefinition("empty", (), lambda s: True, lambda s: True, lambda: [],
                       lambda m: True, counter_transition, counter_valid)
    with pytest.raises(DomainError):
        VlsmDefinition("seeded", ("inc",), lambda s: True, lambda s: s == 0, lambda: [0],
                       lambda m: True, counter_transition, counter_valid, seeds=(2,))
    with pytest.raises(DomainError, match="no initial states"):
        VlsmDefinition("barren", ("inc",), lambda s: True, lambda s: False, lambda: iter(()),
                       lambda m: True, counter_transition, counter_valid)
    assert counter.accepts_messages("copy")
    assert not counter.accepts_messages("inc")


def test_apply_transition(counter):
    """Constrained transitions produce records; beta rejections give None"""
    record = apply_transition(counter, "inc", 0)
    assert record == TransitionRecord("inc", 0, NO_MESSAGE, 1, 1)

    assert apply_transition(counter, "inc", 3) is None, "inc past 3 must be rejected"
    assert apply_transition(counter, "copy", 2, 1) is None, "copy only moves forward"
    assert apply_transition(counter, "copy", 0, 2).destination == 2

    with pytest.raises(DomainError):
        apply_transition(counter, "inc", 7)


def test_trace_helpers():
    """Trace final state, extension and length"""
    trace = Trace(0)
    assert trace.final == 0 and len(trace) == 0
    record = TransitionRecord("inc", 0, NO_MESSAGE, 1, 1)
    extended = trace.extend(record)
    assert extended.final == 1
    assert len(extended) == 1
    assert len(trace) == 0, "extend must not mutate"


def test_constrained_trace(counter):
    """Traces must start initial, chain and re-validate"""
    first = apply_transition(counter, "inc", 0)
    second = apply_transition(counter, "inc", 1)
    assert is_constrained_trace(counter, Trace(0, (first, second)))

    assert not is_constrained_trace(counter, Trace(1, (second,))), "1 is not initial"
    assert not is_constrained_trace(counter, Trace(0, (second,))), "record does not chain"
    forged = TransitionRecord("inc", 0, NO_MESSAGE, 2, 2)
    assert not is_constrained_trace(counter, Trace(0, (forged,)))


def test_closure_converges(counter):
    """Closure finds every state and message, one sweep per new value"""
    closure = valid_closure(counter, 10)

    assert closure.converged
    assert closure.states == (0, 1, 2, 3)
    assert closure.messages == (NO_MESSAGE, 1, 2, 3)
    assert closure.sweeps == 4
    assert closure.history == ((1, 0), (2, 1), (3, 2), (4, 3), (4, 3))
    assert not closure.truncated

    copies = [r for r in closure.transitions if r.label == "copy"]
    assert TransitionRecord("copy", 0, 3, 3, NO_MESSAGE) in copies
    assert TransitionRecord("copy", 1, 2, 2, NO_MESSAGE) in copies


def test_closure_bound(counter):
    """Reaching the bound reports non-convergence"""
    closure = valid_closure(counter, 2)
    assert not closure.converged
    assert closure.sweeps == 2
    assert closure.states == (0, 1, 2)

    empty = valid_closure(counter, 0)
    assert empty.states == (0,)
    assert not empty.converged

    with pytest.raises(DomainError):
        valid_closure(counter, -1)


def assert_monotone(vlsm, bounds):
    for bound in bounds:
        smaller, larger = valid_closure(vlsm, bound), valid_closure(vlsm, bound + 1)
        assert smaller.state_set <= larger.state_set, f"states lost going to bound {bound + 1}"
        assert smaller.message_set <= larger.message_set, f"messages lost going to bound {bound + 1}"
        assert set(smaller.transitions) <= set(larger.transitions)


def test_closure_monotone_in_bound(counter):
    """Raising the bound never loses states, messages or transitions"""
    assert_monotone(counter, range(6))


def test_closure_monotone_on_a_composition():
    """The same holds for a composed puzzle"""
    assert_monotone(build_puzzle(PuzzleInstance.of(2, [1, 2])), range(8))


def test_closure_admit_filter(counter):
    """States rejected by admit are pruned and counted"""
    closure = valid_closure(counter, 10, admit=lambda state: state <= 2)
    assert closure.converged
    assert closure.states == (0, 1, 2)
    assert closure.messages == (NO_MESSAGE, 1, 2)
    assert closure.pruned == 1
    assert closure.truncated


def test_closure_is_deterministic(counter):
    """Two runs give identical results in identical order"""
    first = valid_closure(counter, 10)
    second = valid_closure(counter, 10)
    assert first.states == second.states
    assert first.messages == second.messages
    assert first.transitions == second.transitions


def test_valid_trace(counter):
    """Inputs must be valid messages; missing ones are indeterminate before convergence"""
    copy_two = apply_transition(counter, "copy", 0, 2)
    trace = Trace(0, (copy_two,))
    assert is_valid_trace(counter, trace, 10) == Validity.VALID

    copy_three = apply_transition(counter, "copy", 0, 3)
    assert is_valid_trace(counter, Trace(0, (copy_three,)), 1) == Validity.INDETERMINATE

    copy_only = restrict(counter, lambda label: label == "copy")
    assert is_valid_trace(copy_only, Trace(0, (copy_two,)), 10) == Validity.INVALID

    forged = TransitionRecord("inc", 0, NO_MESSAGE, 3, 3)
    assert is_valid_trace(counter, Trace(0, (forged,)), 10) == Validity.INVALID

    plain = Trace(0, (apply_transition(counter, "inc", 0),))
    assert is_valid_trace(counter, plain, 0) == Validity.VALID


def test_valid_trace_with_given_closure(counter):
    """A precomputed closure is reused"""
    closure = valid_closure(counter, 10)
    trace = Trace(0, (apply_transition(counter, "copy", 0, 3),))
    assert is_valid_trace(counter, trace, 0, closure=closure) == Validity.VALID


def test_restrict(counter):
    """Restriction drops labels and guards beta"""
    inc_only = restrict(counter, lambda label: label == "inc")
    assert inc_only.labels == ("inc",)
    assert inc_only.name == "counter|restricted"
    assert apply_transition(inc_only, "copy", 0, 2) is None

    closure = valid_closure(inc_only, 10)
    assert closure.states == (0, 1, 2, 3)
    assert all(record.label == "inc" for record in closure.transitions)
