"""
Property Checks

Safety and liveness properties of an explored puzzle. Every check returns a
PropertyVerdict; a failed verdict carries the offending state as its witness
and, whenever that state is reachable, a replayable counterexample scenario.
"""

import logging
from typing import Callable, Dict, Iterable, Optional

from ..puzzle.models import INIT, RECEIVE, PuzzleInstance, Status, is_final
from ..puzzle.oracle import Assignment, expected_status
from ..puzzle.rounds import RoundState, consistent, round_of
from ..vlsm.composition import CompositeLabel, CompositeState
from ..vlsm.core import NO_MESSAGE, apply_transition, restrict
from .exploration import Exploration, build_model, run_exploration
from .models import (FACT1, FINAL_REACHABLE, FINALITY, LEMMA1, NO_EQUIVOCATION_FACT,
                     ORACLE_AGREEMENT, PROGRESS, TERMINATION, TWO_PARTY_LEAK,
                     ExplorationConfig, PropertyVerdict, Scenario)

logger = logging.getLogger(__name__)

TraceFor = Callable[[CompositeState], Optional[Scenario]]


def format_state(state: Iterable) -> str:
    return "(" + ", ".join(repr(child) for child in state) + ")"


def _is_initial(state: CompositeState) -> bool:
    return not any(child.running for child in state)


def check_fact1(states: Iterable[CompositeState],
                trace_for: Optional[TraceFor] = None) -> PropertyVerdict:
    """Observation sets stay consistent in every non-initial state"""
    checked = 0
    for state in states:
        if _is_initial(state):
            continue
        checked += 1
        if not consistent(state.components):
            return PropertyVerdict(
                FACT1, False, "inconsistent observation sets",
                counterexample=trace_for(state) if trace_for else None,
                witness=format_state(state))
    return PropertyVerdict(FACT1, True, f"{checked} non-initial states consistent")


def lemma1_violation(child: RoundState, N: int) -> Optional[str]:
    """Which invariant clause a running child breaks, if any"""
    size = len(child.obs)
    if child.status is Status.UNKNOWN and not child.round < size:
        return f"status u needs r < |Obs| = {size}"
    if child.status is Status.MUDDY and not child.round == N - 1 == size:
        return f"status m needs r = N - 1 = |Obs| with N = {N}"
    if child.status is Status.CLEAN and not child.round == N == size:
        return f"status c needs r = N = |Obs| with N = {N}"
    return None


def check_lemma1(states: Iterable[CompositeState], instance: PuzzleInstance,
                 trace_for: Optional[TraceFor] = None) -> PropertyVerdict:
    """
    Round/status invariant of the rounds models

    Args:
        states: States to check; initial composite states are exempt
        instance: Puzzle instance providing N
        trace_for: Optional lookup of a replayable trace to a state

    Returns:
        PropertyVerdict naming the first violating child
    """
    checked = 0
    for state in states:
        if _is_initial(state):
            continue
        checked += 1
        for i, child in enumerate(state, start=1):
            if not isinstance(child, RoundState):
                continue
            problem = lemma1_violation(child, instance.N)
            if problem:
                return PropertyVerdict(
                    LEMMA1, False, f"child {i} at {child!r}: {problem}",
                    counterexample=trace_for(state) if trace_for else None,
                    witness=format_state(state))
    return PropertyVerdict(LEMMA1, True, f"{checked} non-initial states satisfy the invariant")


def check_progress(exploration: Exploration) -> PropertyVerdict:
    """Every non-final state has a successor raising some child's round"""
    for state in exploration.states:
        if is_final(state):
            continue
        advancing = any(
            round_of(record.destination.component(record.label.index))
            > round_of(record.source.component(record.label.index))
            for record in exploration.outgoing(state))
        if not advancing:
            detail = "no round-increasing transition"
            if not exploration.closure.converged:
                detail += " (closure did not converge; the state may be unexpanded)"
            return PropertyVerdict(PROGRESS, False, detail,
                                   counterexample=exploration.trace_to(state),
                                   witness=format_state(state))
    return PropertyVerdict(PROGRESS, True, "every non-final state can advance a round")


def check_termination(exploration: Exploration) -> PropertyVerdict:
    """No transition takes a child's round past |Obs|"""
    for record in exploration.closure.transitions:
        child = record.destination.component(record.label.index)
        if isinstance(child, RoundState) and child.round > len(child.obs):
            return PropertyVerdict(
                TERMINATION, False,
                f"child {record.label.index} reaches round {child.round} > |Obs| = {len(child.obs)}",
                counterexample=exploration.trace_to(record.source, extra=(record,)),
                witness=format_state(record.destination))
    return PropertyVerdict(TERMINATION, True,
                           f"{len(exploration.closure.transitions)} transitions within bounds")


def check_finality(exploration: Exploration) -> PropertyVerdict:
    """Decided children never change"""
    for record in exploration.closure.transitions:
        i = record.label.index
        before, after = record.source.component(i), record.destination.component(i)
        if before.running and before.status.final and after != before:
            return PropertyVerdict(
                FINALITY, False, f"decided child {i} changes from {before!r} to {after!r}",
                counterexample=exploration.trace_to(record.source, extra=(record,)),
                witness=format_state(record.source))
    return PropertyVerdict(FINALITY, True, "decisions are never revised")


def emission_depths(exploration: Exploration) -> Dict[object, int]:
    """Smallest depth of a state emitting each message"""
    depths: Dict[object, int] = {}
    for record in exploration.closure.transitions:
        if record.output is NO_MESSAGE:
            continue
        depth = exploration.depth[record.source]
        if depth < depths.get(record.output, depth + 1):
            depths[record.output] = depth
    return depths


def check_no_equivocation_fact(exploration: Exploration) -> PropertyVerdict:
    """
    Every accepted input was already emitted no deeper than the receiver

    For each state at depth l and each valid message the composition accepts
    there on a receive, some state at depth <= l must emit that message.
    """
    vlsm = exploration.vlsm
    valid_messages = exploration.closure.message_set
    emitted_at = emission_depths(exploration)
    accepted = 0

    for state in exploration.states:
        depth = exploration.depth[state]
        for i in exploration.instance.children:
            label = CompositeLabel(i, RECEIVE)
            if vlsm.candidate_inputs is not None:
                candidates = dict.fromkeys(vlsm.candidate_inputs(label, state))
            else:
                candidates = exploration.closure.messages
            for message in candidates:
                if message is NO_MESSAGE or message not in valid_messages:
                    continue
                record = apply_transition(vlsm, label, state, message)
                if record is None:
                    continue
                accepted += 1
                first = emitted_at.get(message)
                if first is None or first > depth:
                    where = "never" if first is None else f"first at depth {first}"
                    return PropertyVerdict(
                        NO_EQUIVOCATION_FACT, False,
                        f"child {i} accepts {message!r} at depth {depth}; emitted {where}",
                        counterexample=exploration.trace_to(state, extra=(record,)),
                        witness=format_state(state))

    return PropertyVerdict(NO_EQUIVOCATION_FACT, True,
                           f"{accepted} accepted inputs all emitted no deeper than their receiver")


def check_final_reachable(exploration: Exploration) -> PropertyVerdict:
    finals = exploration.final_states
    if finals:
        target = exploration.shortest_final()
        return PropertyVerdict(FINAL_REACHABLE, True,
                               f"{len(finals)} final states, nearest at depth {exploration.depth[target]}")

    def decided(state: CompositeState) -> int:
        return sum(1 for child in state if child.running and child.status.final)

    closest = max(exploration.states, key=decided)
    return PropertyVerdict(FINAL_REACHABLE, False, f"no final state reached{exploration.cap_note}",
                           counterexample=exploration.trace_to(closest),
                           witness=format_state(closest))


def check_oracle_agreement(exploration: Exploration) -> PropertyVerdict:
    """Final statuses match the synchronous solution"""
    instance = exploration.instance
    x = Assignment.from_muddy(instance.n, instance.muddy)
    expected = tuple(expected_status(x, i) for i in instance.children)
    finals = exploration.final_states
    for state in finals:
        statuses = tuple(child.status for child in state)
        if statuses != expected:
            wrong = [i for i, (got, want) in enumerate(zip(statuses, expected), start=1)
                     if got is not want]
            return PropertyVerdict(
                ORACLE_AGREEMENT, False,
                f"children {wrong} decide against the oracle "
                f"({''.join(map(str, statuses))} instead of {''.join(map(str, expected))})",
                counterexample=exploration.trace_to(state),
                witness=format_state(state))
    if not finals:
        return PropertyVerdict(ORACLE_AGREEMENT, True,
                               f"no final state to compare{exploration.cap_note}")
    return PropertyVerdict(ORACLE_AGREEMENT, True,
                           f"{len(finals)} final states agree with the oracle{exploration.cap_note}")


def check_two_party_leak(config: ExplorationConfig,
                         exploration: Optional[Exploration] = None) -> PropertyVerdict:
    """
    A muddy child must not learn its status from one clean partner alone

    For every muddy child i that sees someone and every clean child k, the
    other children may only init; the property fails if i reaches status m.
    """
    instance = config.instance
    vlsm = exploration.vlsm if exploration is not None else None
    pairs = [(i, k) for i in sorted(instance.muddy) if instance.observation(i)
             for k in instance.children if not instance.is_muddy(k)]
    if not pairs:
        return PropertyVerdict(TWO_PARTY_LEAK, True, "no muddy/clean pair to check")

    full = vlsm or build_model(config.model, instance, config.constrained)

    for i, k in pairs:
        talkers = {i, k}
        restricted = restrict(
            full,
            lambda label, talkers=talkers: label.label == INIT or label.index in talkers,
            name=f"{full.name}|talk({i},{k})")
        sub = run_exploration(config.model, instance, config.sweep_bound,
                              history_limit=config.effective_history_limit, vlsm=restricted)
        for state in sub.states:
            child = state.component(i)
            if child.running and child.status is Status.MUDDY:
                return PropertyVerdict(
                    TWO_PARTY_LEAK, False,
                    f"muddy child {i} learns its status talking only to clean child {k}",
                    counterexample=sub.trace_to(state),
                    witness=format_state(state))
        logger.debug(f"two-party exchange ({i}, {k}): {len(sub.states)} states, no leak")

    return PropertyVerdict(TWO_PARTY_LEAK, True,
                           f"{len(pairs)} muddy/clean pairs checked without a leak")


def check_properties(config: ExplorationConfig,
                     exploration: Exploration) -> Dict[str, PropertyVerdict]:
    """Run the configured properties in order"""
    trace_for = exploration.trace_to
    checks: Dict[str, Callable[[], PropertyVerdict]] = {
        FACT1: lambda: check_fact1(exploration.states, trace_for),
        LEMMA1: lambda: check_lemma1(exploration.states, config.instance, trace_for),
        FINALITY: lambda: check_finality(exploration),
        PROGRESS: lambda: check_progress(exploration),
        TERMINATION: lambda: check_termination(exploration),
        NO_EQUIVOCATION_FACT: lambda: check_no_equivocation_fact(exploration),
        FINAL_REACHABLE: lambda: check_final_reachable(exploration),
        ORACLE_AGREEMENT: lambda: check_oracle_agreement(exploration),
        TWO_PARTY_LEAK: lambda: check_two_party_leak(config, exploration),
    }
    verdicts: Dict[str, PropertyVerdict] = {}
    for name in config.properties:
        verdict = checks[name]()
        level = logging.DEBUG if verdict.passed else logging.WARNING
        logger.log(level, f"{name}: {'pass' if verdict.passed else 'FAIL'} - {verdict.detail}")
        verdicts[name] = verdict
    return verdicts
