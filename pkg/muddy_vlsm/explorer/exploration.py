"""
Exploration

Builds the composed puzzle for a configuration, saturates its valid states
and messages, and arranges the result as a networkx reachability graph
rooted at the designated initial state. Depths, shortest traces and
counterexample scenarios are read off that graph.
"""

import logging
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import psutil

from ..puzzle.history import (HISTORY_CONSTRAINT, build_puzzle3, history_cap,
                              make_history_child)
from ..puzzle.models import RECEIVE, PuzzleInstance, initial_state, is_final
from ..puzzle.oracle import Assignment, expected_status, sync_rounds
from ..puzzle.rounds import ROUNDS_CONSTRAINT, build_puzzle, make_child
from ..utils.logging import get_logger
from ..vlsm.composition import FREE, CompositeState, CompositionConstraint
from ..vlsm.core import (NO_MESSAGE, ClosureResult, TransitionRecord,
                         VlsmDefinition, valid_closure)
from .models import (ExplorationConfig, ModelKind, ReachabilityReport,
                     Scenario, ScenarioStep)

logger = logging.getLogger(__name__)


def model_parts(model: ModelKind, instance: PuzzleInstance,
                constrained: bool = True) -> Tuple[List[VlsmDefinition], CompositionConstraint]:
    """Component machines and composition constraint of a model"""
    if model is ModelKind.HISTORY:
        children = [make_history_child(i, instance.n) for i in instance.children]
        return children, HISTORY_CONSTRAINT if constrained else FREE
    children = [make_child(i, instance.n, model.with_jump) for i in instance.children]
    return children, ROUNDS_CONSTRAINT if constrained else FREE


def build_model(model: ModelKind, instance: PuzzleInstance,
                constrained: bool = True) -> VlsmDefinition:
    if model is ModelKind.HISTORY:
        return build_puzzle3(instance, constrained=constrained)
    return build_puzzle(instance, with_jump=model.with_jump, constrained=constrained)


class Exploration:
    """
    Saturated closure of one composed puzzle and its reachability graph

    Nodes are composite states; every constrained transition found by the
    closure is an edge carrying its TransitionRecord under "record".
    """

    def __init__(self, model: ModelKind, instance: PuzzleInstance,
                 vlsm: VlsmDefinition, closure: ClosureResult,
                 history_limit: Optional[int] = None):
        self.model = model
        self.instance = instance
        self.vlsm = vlsm
        self.closure = closure
        self.history_limit = history_limit
        self.root: CompositeState = vlsm.seeds[0] if vlsm.seeds else closure.states[0]

        self.graph = nx.MultiDiGraph()
        self.graph.add_nodes_from(closure.states)
        for record in closure.transitions:
            self.graph.add_edge(record.source, record.destination, record=record)
        self.depth: Dict[CompositeState, int] = nx.single_source_shortest_path_length(
            self.graph, self.root)

    @property
    def states(self) -> Tuple[CompositeState, ...]:
        return self.closure.states

    @property
    def cap_note(self) -> str:
        """Qualifier for verdicts drawn from a history-truncated closure"""
        if not self.closure.truncated:
            return ""
        if self.history_limit is None:
            return " within the history cap"
        return f" within history cap {self.history_limit}"

    @property
    def final_states(self) -> List[CompositeState]:
        return [state for state in self.closure.states if is_final(state)]

    def outgoing(self, state: CompositeState) -> List[TransitionRecord]:
        return [data["record"] for _, _, data in self.graph.out_edges(state, data=True)]

    def path_records(self, target: CompositeState) -> List[TransitionRecord]:
        """State-changing records of a shortest trace from the root to target"""
        nodes = nx.shortest_path(self.graph, self.root, target)
        records = []
        for source, destination in zip(nodes, nodes[1:]):
            edges = self.graph.get_edge_data(source, destination)
            records.append(next(iter(edges.values()))["record"])
        return records

    def scenario_for(self, records: Sequence[TransitionRecord],
                     name: Optional[str] = None) -> Scenario:
        """Replayable scenario with every receive input spelled out"""
        steps = []
        for record in records:
            message = record.input if record.input is not NO_MESSAGE else None
            steps.append(ScenarioStep(record.label.index, record.label.label, message=message))
        return Scenario(self.model, self.instance, tuple(steps), name=name)

    def trace_to(self, target: CompositeState,
                 extra: Sequence[TransitionRecord] = ()) -> Scenario:
        return self.scenario_for(self.path_records(target) + list(extra))

    def shortest_final(self) -> Optional[CompositeState]:
        finals = self.final_states
        if not finals:
            return None
        return min(finals, key=lambda state: self.depth.get(state, len(self.states)))


def run_exploration(model: ModelKind, instance: PuzzleInstance, bound: int,
                    constrained: bool = True, history_limit: Optional[int] = None,
                    vlsm: Optional[VlsmDefinition] = None) -> Exploration:
    """Saturate a composed puzzle (or the supplied variant of it)"""
    vlsm = vlsm or build_model(model, instance, constrained)
    if model is not ModelKind.HISTORY:
        history_limit = None
    closure = valid_closure(vlsm, bound, admit=history_cap(history_limit))
    return Exploration(model, instance, vlsm, closure, history_limit=history_limit)


def receive_counts(scenario: Scenario) -> Dict[int, int]:
    counts = {i: 0 for i in scenario.instance.children}
    for step in scenario.steps:
        if step.label == RECEIVE:
            counts[step.component] += 1
    return counts


def oracle_table(exploration: Exploration) -> Dict[str, object]:
    """Synchronous solution next to the final statuses the protocol reached"""
    instance = exploration.instance
    x = Assignment.from_muddy(instance.n, instance.muddy)
    solution = sync_rounds(x)
    expected = [expected_status(x, i).value for i in instance.children]
    finals = sorted({tuple(child.status.value for child in state)
                     for state in exploration.final_states})
    return {
        "rounds_to_yes": list(solution.rounds_to_yes),
        "expected": expected,
        "protocol_finals": [list(statuses) for statuses in finals],
        "agree": all(list(statuses) == expected for statuses in finals),
    }


def explore(config: ExplorationConfig) -> ReachabilityReport:
    """
    Explore one instance and check the configured properties

    Args:
        config: Exploration configuration

    Returns:
        ReachabilityReport; non-convergence is flagged, not raised
    """
    from .properties import check_properties

    log = get_logger(__name__, structured=True)
    log.set_context(model=config.model.value, n=config.instance.n,
                    muddy=sorted(config.instance.muddy))
    log.info(f"Exploring {config.model.value} [{config.instance}] "
             f"with bound {config.sweep_bound}")

    exploration = run_exploration(config.model, config.instance, config.sweep_bound,
                                  constrained=config.constrained,
                                  history_limit=config.effective_history_limit)
    closure = exploration.closure

    report = ReachabilityReport(
        config=config,
        sweeps=closure.sweeps,
        converged=closure.converged,
        truncated=closure.truncated,
        states=len(closure.states),
        messages=len(closure.messages) - 1,
        sweep_counts=list(closure.history),
        final_states=len(exploration.final_states),
        generated_at=datetime.now(timezone.utc).isoformat(),
    )

    target = exploration.shortest_final()
    if target is not None:
        report.shortest_final_trace = exploration.trace_to(target)
        report.receive_counts = receive_counts(report.shortest_final_trace)

    report.properties = check_properties(config, exploration)
    report.oracle = oracle_table(exploration)

    rss = psutil.Process().memory_info().rss
    log.info(f"Explored {report.states} states and {report.messages} messages in "
             f"{report.sweeps} sweeps (converged={report.converged}, "
             f"truncated={report.truncated}, rss={rss / (1024 * 1024):.1f} MiB)")
    failures = report.failures()
    if failures:
        log.warning(f"Property failures: {', '.join(failures)}")
    return report
