from typing import Dict, Iterable, List, Mapping, Optional, Tuple
import logging
import networkx as nx

from chainrisk.config import settings
from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.models.project import Project
from chainrisk.models.schedule import TimeWindow

logger = logging.getLogger(__name__)


def sorted_graph(g: nx.DiGraph) -> List[int]:
    """Deterministic topological order (smallest ready id first)"""
    try:
        return list(nx.lexicographical_topological_sort(g))
    except nx.NetworkXUnfeasible as e:
        raise AnalysisError(ErrorCode.CYCLE, "precedence network contains a cycle") from e


def topological_order(nodes: Iterable[int], arcs: Iterable[Tuple[int, int]]):
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(arcs)
    return sorted_graph(g), g


def cpm_pass(
    project: Project,
    durations: Mapping[int, float],
    extra_arcs: Optional[Iterable[Tuple[int, int]]] = None,
) -> Dict[int, TimeWindow]:
    """
    Forward/backward pass over precedence arcs (plus optional extra arcs)

    Args:
        project: Project whose precedence forms a DAG
        durations: Duration per task id
        extra_arcs: Additional finish-to-start links, e.g. resource links

    Returns:
        Time window per task id
    """
    missing = [tid for tid in project.task_ids if tid not in durations]
    if missing:
        raise AnalysisError(
            ErrorCode.MISSING_DURATION,
            f"no duration given for tasks {missing}",
            location=f"task {missing[0]}",
        )

    g = project.graph()
    g.add_edges_from(extra_arcs or ())
    order = sorted_graph(g)

    early_start: Dict[int, float] = {}
    early_finish: Dict[int, float] = {}
    for tid in order:
        early_start[tid] = max((early_finish[p] for p in g.predecessors(tid)), default=0.0)
        early_finish[tid] = early_start[tid] + durations[tid]

    makespan = max(early_finish.values(), default=0.0)

    late_start: Dict[int, float] = {}
    late_finish: Dict[int, float] = {}
    for tid in reversed(order):
        late_finish[tid] = min((late_start[s] for s in g.successors(tid)), default=makespan)
        late_start[tid] = late_finish[tid] - durations[tid]

    # Float noise on tight paths must not hide zero slack
    tolerance = settings.slack_tolerance * max(1.0, makespan)
    windows = {}
    for tid in project.task_ids:
        slack = late_start[tid] - early_start[tid]
        windows[tid] = TimeWindow(
            early_start=early_start[tid],
            early_finish=early_finish[tid],
            late_start=late_start[tid],
            late_finish=late_finish[tid],
            slack=0.0 if slack <= tolerance else slack,
        )
    return windows


def makespan_of(windows: Mapping[int, TimeWindow]) -> float:
    return max((w.early_finish for w in windows.values()), default=0.0)
