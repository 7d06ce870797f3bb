from itertools import product
from math import fsum, prod
from typing import List, Mapping, Optional, Union
import logging

from chainrisk.config import settings
from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.models.mitigation import (
    BasicEvent,
    EventTree,
    EventTreePath,
    FaultTree,
    Gate,
    GateKind,
    MitigationReport,
    RootCause,
)

logger = logging.getLogger(__name__)


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def _evaluate(node: Union[Gate, BasicEvent], overrides: Mapping[str, float]) -> float:
    if isinstance(node, BasicEvent):
        return overrides.get(node.event, node.probability)
    if not node.children:
        raise AnalysisError(ErrorCode.EMPTY_GATE, f"{node.gate.value} gate '{node.name}' has no children", location=node.name or None)

    values = [_evaluate(child, overrides) for child in node.children]
    if node.gate is GateKind.AND:
        return _clamp01(prod(values))
    return _clamp01(1.0 - prod(1.0 - v for v in values))


def evaluate_fault_tree(tree: FaultTree, overrides: Optional[Mapping[str, float]] = None) -> float:
    """
    Top event probability with independent basic events

    AND = product of children, OR = 1 - prod(1 - child).

    Args:
        tree: Fault tree
        overrides: Basic-event probabilities replacing the tree's values

    Returns:
        Probability in [0, 1]
    """
    return _evaluate(tree.root, overrides or {})


def evaluate_event_tree(tree: EventTree, initiating_probability: Optional[float] = None) -> List[EventTreePath]:
    """All 2^k success/failure paths in lexicographic order, S before F"""
    k = len(tree.strategies)
    if k > settings.max_event_tree_strategies:
        raise AnalysisError(
            ErrorCode.TOO_MANY_STRATEGIES,
            f"{k} strategies exceed the limit of {settings.max_event_tree_strategies}",
        )

    if initiating_probability is None:
        initiating_probability = 1.0 if tree.initiating_probability is None else tree.initiating_probability

    paths = []
    for outcome in product("SF", repeat=k):
        branch = [
            s.failure_probability if o == "F" else 1.0 - s.failure_probability
            for o, s in zip(outcome, tree.strategies)
        ]
        paths.append(EventTreePath(signature="".join(outcome), probability=initiating_probability * prod(branch)))
    return paths


def rank_root_causes(tree: FaultTree) -> List[RootCause]:
    """Zero-out importance: P(top) - P(top | event impossible), largest first"""
    top = evaluate_fault_tree(tree)
    causes = []
    for event in tree.basic_events():
        without = evaluate_fault_tree(tree, {event.event: 0.0})
        causes.append(RootCause(event=event.event, contribution=max(0.0, top - without)))
    return sorted(causes, key=lambda c: (-c.contribution, c.event))


def analyze_mitigation(fault_tree: FaultTree, event_tree: Optional[EventTree] = None) -> MitigationReport:
    """
    Bow-tie analysis of one critical risk event

    The event tree starts from its own initiating probability, or from the
    fault-tree top event probability when it gives none.
    """
    event_tree = event_tree or EventTree()
    top = evaluate_fault_tree(fault_tree)
    initiating = top if event_tree.initiating_probability is None else event_tree.initiating_probability

    paths = evaluate_event_tree(event_tree, initiating)
    all_success = paths[0].probability if paths else initiating
    report = MitigationReport(
        top_event=fault_tree.name,
        top_event_probability=top,
        initiating_probability=initiating,
        ranked_root_causes=tuple(rank_root_causes(fault_tree)),
        strategies=event_tree.strategies,
        path_table=tuple(paths),
        all_success_probability=all_success,
    )

    drift = abs(fsum(p.probability for p in paths) - initiating)
    if drift > 1e-9:
        logger.warning(f"Event tree paths sum off the initiating probability by {drift:.2e}")
    logger.info(
        f"Top event '{fault_tree.name}' probability {top:.4f}; "
        f"{len(paths)} event tree paths over {len(event_tree.strategies)} strategies"
    )
    return report


def format_mitigation_table(report: MitigationReport) -> str:
    """Plain-text root cause ranking and event tree path table"""
    lines = [
        f"Top event: {report.top_event}",
        f"P(top event) = {report.top_event_probability:.6f}",
        "",
        "Root causes (zero-out contribution)",
        f"{'rank':>4}  {'event':<30} {'contribution':>12}",
    ]
    for rank, cause in enumerate(report.ranked_root_causes, start=1):
        lines.append(f"{rank:>4}  {cause.event:<30} {cause.contribution:>12.6f}")

    lines += ["", f"Event tree (initiating probability {report.initiating_probability:.6f})"]
    if report.strategies:
        lines.append("strategies: " + ", ".join(f"{s.name} (f={s.failure_probability:g})" for s in report.strategies))
    lines.append(f"{'path':<{max(4, len(report.strategies))}}  {'probability':>12}")
    for path in report.path_table:
        lines.append(f"{path.signature or '-':<{max(4, len(report.strategies))}}  {path.probability:>12.6f}")
    lines.append(f"P(all strategies succeed) = {report.all_success_probability:.6f}")
    return "\n".join(lines) + "\n"
