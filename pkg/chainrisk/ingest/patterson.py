from typing import List, Tuple
import logging
import re

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.models.project import Project, Task

logger = logging.getLogger(__name__)


class _Tokens:
    """Whitespace-separated integer tokens with their line numbers"""

    def __init__(self, text: str):
        self.items: List[Tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            for token in line.split():
                self.items.append((token, lineno))
        self.pos = 0
        self.last_line = len(text.splitlines()) or 1

    def next_int(self, what: str) -> Tuple[int, int]:
        if self.pos >= len(self.items):
            raise ParseError(
                ErrorCode.MALFORMED,
                f"unexpected end of input while reading {what}",
                location=f"line {self.last_line}",
            )
        token, lineno = self.items[self.pos]
        self.pos += 1
        if not re.fullmatch(r"[+-]?\d+", token):
            raise ParseError(
                ErrorCode.MALFORMED,
                f"expected an integer for {what}, got '{token}'",
                location=f"line {lineno}",
            )
        return int(token), lineno

    def next_count(self, what: str) -> Tuple[int, int]:
        value, lineno = self.next_int(what)
        if value < 0:
            raise ParseError(ErrorCode.RANGE, f"{what} must be >= 0, got {value}", location=f"line {lineno}")
        return value, lineno


def parse_patterson(text: str) -> Project:
    """
    Parse a Patterson-format instance

    Layout: ``n m`` header, m capacities, then n job records
    ``duration d_1..d_m s succ_1..succ_s``. Job 1 and job n are the dummy
    source and sink.

    Returns:
        Project whose four estimates all equal the listed duration
    """
    tokens = _Tokens(text)
    n, _ = tokens.next_count("job count")
    m, _ = tokens.next_count("resource count")
    if n < 1:
        raise ParseError(ErrorCode.RANGE, "instance needs at least one job", location="line 1")

    resource_ids = [f"R{k}" for k in range(1, m + 1)]
    capacities = {}
    for rid in resource_ids:
        capacities[rid], _ = tokens.next_count(f"capacity of {rid}")

    tasks = []
    arcs = []
    for job in range(1, n + 1):
        duration, _ = tokens.next_count(f"duration of job {job}")
        demand = {}
        for rid in resource_ids:
            demand[rid], _ = tokens.next_count(f"demand of job {job} on {rid}")
        succ_count, _ = tokens.next_count(f"successor count of job {job}")
        for _ in range(succ_count):
            succ, lineno = tokens.next_int(f"successor of job {job}")
            if not 1 <= succ <= n:
                raise ParseError(
                    ErrorCode.RANGE,
                    f"job {job} lists successor {succ} outside [1, {n}]",
                    location=f"line {lineno}",
                )
            arcs.append((job, succ))
        value = float(duration)
        tasks.append(
            Task(
                id=job,
                name=f"J{job}",
                est_min=value,
                est_avg=value,
                est_safe=value,
                est_max=value,
                resource_demand={rid: float(u) for rid, u in demand.items()},
            )
        )

    if tokens.pos < len(tokens.items):
        token, lineno = tokens.items[tokens.pos]
        raise ParseError(ErrorCode.MALFORMED, f"unexpected trailing token '{token}'", location=f"line {lineno}")

    logger.debug(f"Parsed Patterson instance: {n} jobs, {m} resources, {len(arcs)} arcs")
    return Project(
        tasks=tuple(tasks),
        precedence=tuple(arcs),
        resources={rid: float(c) for rid, c in capacities.items()},
    )


def _as_int(value: float, what: str) -> int:
    if value != int(value):
        raise ParseError(ErrorCode.RANGE, f"{what} {value} is not integral; Patterson files are integer-only")
    return int(value)


def serialize_patterson(project: Project) -> str:
    """Write a project back to Patterson layout (uses the average estimate)"""
    n = len(project.tasks)
    if project.task_ids != list(range(1, n + 1)):
        raise ParseError(ErrorCode.MALFORMED, "Patterson output needs task ids 1..n in order")
    resource_ids = list(project.resources)
    if resource_ids != [f"R{k}" for k in range(1, len(resource_ids) + 1)]:
        raise ParseError(ErrorCode.MALFORMED, "Patterson output needs resources named R1..Rm in order")

    succs = project.successors()
    lines = [f"{n} {len(resource_ids)}"]
    lines.append(" ".join(str(_as_int(project.resources[r], f"capacity of {r}")) for r in resource_ids))
    for task in project.tasks:
        fields = [_as_int(task.est_avg, f"duration of task {task.id}")]
        fields += [_as_int(task.resource_demand.get(r, 0.0), f"demand of task {task.id}") for r in resource_ids]
        fields.append(len(succs[task.id]))
        fields += succs[task.id]
        lines.append(" ".join(str(f) for f in fields))
    return "\n".join(lines) + "\n"
