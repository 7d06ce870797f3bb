from collections import Counter
from typing import List, Optional
import logging
import networkx as nx

from chainrisk.errors import ErrorCode
from chainrisk.models.project import Project, ValidationFinding, ValidationReport

logger = logging.getLogger(__name__)


def _finding(code: ErrorCode, message: str, task_id: Optional[int] = None, location: Optional[str] = None):
    if location is None and task_id is not None:
        location = f"task {task_id}"
    return ValidationFinding(code=code, message=message, location=location, task_id=task_id)


def _sort_key(f: ValidationFinding):
    return (f.task_id is None, f.task_id or 0, f.code.value, f.message)


def validate_project(project: Project) -> ValidationReport:
    """
    Check every structural invariant of a project

    Findings are data: nothing is raised for an invalid project.

    Returns:
        ValidationReport with errors and warnings ordered by task id, then code
    """
    errors: List[ValidationFinding] = []
    warnings: List[ValidationFinding] = []

    # Task ids
    id_counts = Counter(project.task_ids)
    for tid, count in id_counts.items():
        if count > 1:
            errors.append(_finding(ErrorCode.DUPLICATE_TASK, f"task id {tid} appears {count} times", tid))
        if tid < 1:
            errors.append(_finding(ErrorCode.INVALID_ID, f"task id {tid} is not a positive integer", tid))
    known = set(id_counts)

    # Arcs
    arc_counts = Counter(project.precedence)
    valid_arcs = []
    for (a, b), count in arc_counts.items():
        if a == b:
            errors.append(_finding(ErrorCode.SELF_ARC, f"arc ({a},{b}) links a task to itself", a))
            continue
        if a not in known or b not in known:
            bad = [x for x in (a, b) if x not in known]
            errors.append(
                _finding(
                    ErrorCode.DANGLING_ARC,
                    f"arc ({a},{b}) references unknown tasks {bad}",
                    a,
                    location=f"arc ({a},{b})",
                )
            )
            continue
        if count > 1:
            errors.append(_finding(ErrorCode.DUPLICATE_ARC, f"arc ({a},{b}) listed {count} times", a))
        valid_arcs.append((a, b))

    g = nx.DiGraph()
    g.add_nodes_from(known)
    g.add_edges_from(valid_arcs)
    for component in nx.strongly_connected_components(g):
        if len(component) > 1:
            members = sorted(component)
            errors.append(
                _finding(
                    ErrorCode.CYCLE,
                    f"tasks {members} form a cycle",
                    members[0],
                    location="tasks " + ",".join(str(m) for m in members),
                )
            )

    # Estimates and demands
    for task in project.tasks:
        if not task.estimates_ordered():
            errors.append(
                _finding(
                    ErrorCode.ESTIMATE_ORDER,
                    f"estimates must satisfy 0 <= min <= avg <= safe <= max, got "
                    f"({task.est_min}, {task.est_avg}, {task.est_safe}, {task.est_max})",
                    task.id,
                )
            )
        for rid, units in sorted(task.resource_demand.items()):
            if units < 0:
                errors.append(_finding(ErrorCode.NEGATIVE_DEMAND, f"demand {units} on '{rid}' is negative", task.id))
            elif rid not in project.resources:
                if units > 0:
                    errors.append(_finding(ErrorCode.UNKNOWN_RESOURCE, f"demand on undeclared resource '{rid}'", task.id))
            elif units > project.resources[rid]:
                errors.append(
                    _finding(
                        ErrorCode.DEMAND_EXCEEDS_CAPACITY,
                        f"demand {units} on '{rid}' exceeds capacity {project.resources[rid]}",
                        task.id,
                    )
                )

    # Shape warnings
    if valid_arcs or len(known) > 1:
        sources = sorted(n for n in g.nodes if g.in_degree(n) == 0)
        sinks = sorted(n for n in g.nodes if g.out_degree(n) == 0)
        if len(sources) > 1:
            warnings.append(_finding(ErrorCode.MULTIPLE_SOURCES, f"network has {len(sources)} start tasks {sources}"))
        if len(sinks) > 1:
            warnings.append(_finding(ErrorCode.MULTIPLE_SINKS, f"network has {len(sinks)} end tasks {sinks}"))

    errors.sort(key=_sort_key)
    warnings.sort(key=_sort_key)

    if errors:
        logger.info(f"Validation found {len(errors)} errors: {sorted({f.code.value for f in errors})}")
    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))
