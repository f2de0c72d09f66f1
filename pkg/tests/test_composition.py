#!/usr/bin/env python3
"""
Composition Validation Test
Tests composite labels and states, constrained composition and equivocation checks
"""

import pytest

from muddy_vlsm.errors import ConstructionError, DomainError
from muddy_vlsm.puzzle.history import make_history_child
from muddy_vlsm.puzzle.models import EMIT, INIT, RECEIVE, InitialState, PuzzleInstance, Status
from muddy_vlsm.puzzle.rounds import (RoundMessage, RoundState, build_puzzle, make_child,
                                      round_emittable)
from muddy_vlsm.vlsm.composition import (FREE, CompositeLabel, CompositeState,
                                         CompositionConstraint, bounded_emittable,
                                         compose, message_sender, no_equivocation)
from muddy_vlsm.vlsm.core import NO_MESSAGE, apply_transition, valid_closure


def test_composite_label():
    """Indices are positive integers"""
    label = CompositeLabel(2, EMIT)
    assert str(label) == "2:emit"
    with pytest.raises(DomainError):
        CompositeLabel(0, EMIT)


def test_composite_state_is_one_based():
    """component(i) and replace(i, s) address child i"""
    state = CompositeState(("a", "b", "c"))
    assert state.component(1) == "a"
    assert state.component(3) == "c"
    assert state.replace(2, "x") == CompositeState(("a", "x", "c"))
    assert state == CompositeState(("a", "b", "c")), "replace must not mutate"
    assert len(state) == 3
    assert list(state) == ["a", "b", "c"]
    with pytest.raises(DomainError):
        state.component(4)
    with pytest.raises(DomainError):
        state.replace(0, "x")


def test_compose_rejects_bad_families():
    """Empty families and mixed message domains cannot be composed"""
    with pytest.raises(ConstructionError):
        compose([])
    with pytest.raises(ConstructionError):
        compose([make_child(1, 3), make_history_child(2, 3)])


def test_compose_labels_and_names():
    """Composite labels pair each index with its local labels"""
    children = [make_child(1, 2, with_jump=False), make_child(2, 2, with_jump=False)]
    free = compose(children)
    assert free.name == "child1+child2"
    assert len(free.labels) == 6
    assert CompositeLabel(2, RECEIVE) in free.labels
    assert free.accepts_messages(CompositeLabel(1, RECEIVE))
    assert not free.accepts_messages(CompositeLabel(1, EMIT))

    never = CompositionConstraint("never", lambda label, state, message: False)
    constrained = compose(children, never)
    assert constrained.name == "(child1+child2)|never"


def test_composite_transition_and_constraint():
    """Only the labelled component moves; the constraint is consulted every time"""
    children = [make_child(1, 2, with_jump=False), make_child(2, 2, with_jump=False)]
    start = CompositeState((InitialState(frozenset({2})), InitialState(frozenset({1}))))
    free = compose(children, FREE)

    record = apply_transition(free, CompositeLabel(1, INIT), start)
    assert record.destination == start.replace(1, RoundState(frozenset({2}), 0, Status.UNKNOWN))
    assert record.output is NO_MESSAGE

    blocked = compose(children, CompositionConstraint(
        "no-init", lambda label, state, message: label.label != INIT))
    assert apply_transition(blocked, CompositeLabel(1, INIT), start) is None
    assert apply_transition(free, CompositeLabel(3, INIT), start) is None


def test_composite_initial_states():
    """S0 of the composite is the product of the components' S0"""
    free = compose([make_child(1, 2), make_child(2, 2)])
    initial = list(free.initial_states())
    assert len(initial) == 4
    assert all(free.is_initial(state) for state in initial)


def test_message_sender():
    """Messages must carry an integer sender"""
    assert message_sender(RoundMessage(2, 0, Status.UNKNOWN)) == 2
    with pytest.raises(DomainError):
        message_sender("no sender")
    with pytest.raises(DomainError):
        no_equivocation(CompositeState(("a",)), 5, lambda sender, state, message: True)


def test_no_equivocation_uses_sender_state():
    """The emission test sees the sender's current state"""
    sender_state = RoundState(frozenset({1}), 1, Status.MUDDY)
    state = CompositeState((RoundState(frozenset({2}), 0, Status.UNKNOWN), sender_state))

    assert no_equivocation(state, RoundMessage(2, 1, Status.MUDDY), round_emittable)
    assert no_equivocation(state, RoundMessage(2, 0, Status.UNKNOWN), round_emittable)
    assert not no_equivocation(state, RoundMessage(2, 1, Status.UNKNOWN), round_emittable)
    assert not no_equivocation(state, RoundMessage(3, 0, Status.UNKNOWN), round_emittable)


def test_bounded_emittable_matches_closed_form():
    """Bounded search agrees with the rounds model's closed-form emission test"""
    child = make_child(2, 2, with_jump=False)
    emittable = bounded_emittable(child, [RoundMessage(1, 0, Status.UNKNOWN)], bound=3)
    decided = RoundState(frozenset({1}), 1, Status.MUDDY)
    undecided = RoundState(frozenset({1}), 0, Status.UNKNOWN)

    cases = [
        (decided, RoundMessage(2, 1, Status.MUDDY)),
        (decided, RoundMessage(2, 0, Status.UNKNOWN)),
        (undecided, RoundMessage(2, 0, Status.UNKNOWN)),
        (undecided, RoundMessage(2, 1, Status.MUDDY)),
    ]
    for target, message in cases:
        assert emittable(2, target, message) == round_emittable(2, target, message), \
            f"disagreement on {message!r} at {target!r}"


def test_bounded_emittable_respects_bound():
    """Init, receive and emit take three steps"""
    child = make_child(2, 2, with_jump=False)
    decided = RoundState(frozenset({1}), 1, Status.MUDDY)
    message = RoundMessage(2, 1, Status.MUDDY)

    assert bounded_emittable(child, [RoundMessage(1, 0, Status.UNKNOWN)], 3)(2, decided, message)
    assert not bounded_emittable(child, [RoundMessage(1, 0, Status.UNKNOWN)], 2)(2, decided, message)
    assert not bounded_emittable(child, [], 6)(2, decided, message), "needs child 1's message"


@pytest.fixture(scope="module")
def three_muddy():
    """Constrained and free rounds closures for n = 3, Muddy = {1, 2, 3}"""
    instance = PuzzleInstance.of(3, [1, 2, 3])
    constrained = valid_closure(build_puzzle(instance), 60)
    free = valid_closure(build_puzzle(instance, constrained=False), 60)
    return instance, constrained, free


def test_free_contains_constrained(three_muddy):
    """Dropping the constraint only adds valid states and messages"""
    _, constrained, free = three_muddy
    assert constrained.converged and free.converged
    assert constrained.state_set <= free.state_set
    assert constrained.message_set <= free.message_set
    extra = free.state_set - constrained.state_set
    assert extra, "the free composition reaches states the constraint forbids"


@pytest.mark.parametrize("with_jump", [False, True])
def test_transitions_project_to_components(with_jump):
    """Each composite transition is a component transition of the labelled child alone"""
    instance = PuzzleInstance.of(3, [1, 2])
    closure = valid_closure(build_puzzle(instance, with_jump=with_jump), 60)
    children = {i: make_child(i, 3, with_jump=with_jump) for i in instance.children}
    for record in closure.transitions:
        i = record.label.index
        local = apply_transition(children[i], record.label.label,
                                 record.source.component(i), record.input)
        assert local is not None, f"{record.label} is not a transition of child {i}"
        assert local.destination == record.destination.component(i)
        assert local.output == record.output
        for k in instance.children:
            if k != i:
                assert record.destination.component(k) == record.source.component(k), \
                    f"{record.label} moved child {k}"
