from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
import logging

from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.models.project import Project
from chainrisk.models.schedule import BaselineSchedule
from chainrisk.network.cpm import cpm_pass

logger = logging.getLogger(__name__)

# Slack for float comparisons of resource loads and times
EPS = 1e-9


@dataclass(frozen=True)
class CapacityViolation:
    resource: str
    time: float
    load: float
    capacity: float


class _ResourceProfile:
    """Scheduled tasks and their demands, queried at event points"""

    def __init__(self, capacities: Dict[str, float]):
        self.capacities = capacities
        self.start: Dict[int, float] = {}
        self.finish: Dict[int, float] = {}
        self.demand: Dict[int, Dict[str, float]] = {}

    def add(self, tid: int, start: float, finish: float, demand: Dict[str, float]):
        self.start[tid] = start
        self.finish[tid] = finish
        self.demand[tid] = demand

    def load(self, rid: str, at: float) -> float:
        return sum(
            d.get(rid, 0.0)
            for tid, d in self.demand.items()
            if self.start[tid] <= at < self.finish[tid]
        )

    def fits(self, demand: Dict[str, float], t0: float, t1: float) -> bool:
        points = [t0] + [s for s in self.start.values() if t0 < s < t1]
        for rid, units in demand.items():
            capacity = self.capacities.get(rid, 0.0)
            for q in points:
                if self.load(rid, q) + units > capacity + EPS:
                    return False
        return True

    def releaser(self, at: float, demand: Dict[str, float]) -> Optional[int]:
        """Task whose finish at ``at`` freed capacity for ``demand``"""
        finishing = sorted(t for t, f in self.finish.items() if abs(f - at) <= EPS)
        sharing = [t for t in finishing if any(self.demand[t].get(rid, 0.0) > 0 for rid in demand)]
        if sharing:
            return sharing[0]
        return finishing[0] if finishing else None


def _check_feasible(project: Project):
    for task in project.tasks:
        for rid, units in sorted(task.resource_demand.items()):
            capacity = project.resources.get(rid, 0.0)
            if units > capacity:
                raise AnalysisError(
                    ErrorCode.INFEASIBLE,
                    f"task {task.id} demands {units} of '{rid}' but capacity is {capacity}",
                    location=f"task {task.id}",
                )


def build_baseline(project: Project) -> BaselineSchedule:
    """
    Serial schedule generation on average estimates

    Eligible tasks (all predecessors placed) are taken by minimum CPM late
    start, ties by smaller id, and placed at the earliest precedence- and
    resource-feasible time. A task that waited for capacity gets a resource
    link from the task whose finish released it.

    Returns:
        BaselineSchedule with resource links
    """
    _check_feasible(project)
    durations = project.durations("est_avg")
    windows = cpm_pass(project, durations)
    preds = project.predecessors()

    profile = _ResourceProfile(project.resources)
    links: List[Tuple[int, int]] = []
    remaining = set(project.task_ids)

    while remaining:
        eligible = [t for t in remaining if all(p in profile.finish for p in preds[t])]
        tid = min(eligible, key=lambda t: (windows[t].late_start, t))
        remaining.discard(tid)

        duration = durations[tid]
        demand = {r: u for r, u in project.task(tid).resource_demand.items() if u > 0}
        ready = max((profile.finish[p] for p in preds[tid]), default=0.0)

        start = ready
        if demand and duration > 0:
            candidates = sorted({ready} | {f for f in profile.finish.values() if f > ready})
            start = next(t for t in candidates if profile.fits(demand, t, t + duration))
            if start > ready + EPS:
                releasing = profile.releaser(start, demand)
                if releasing is not None:
                    links.append((releasing, tid))
                    logger.debug(f"Task {tid} waits for resources until {start} (released by task {releasing})")

        profile.add(tid, start, start + duration, demand)

    schedule = BaselineSchedule(
        start={t: profile.start[t] for t in project.task_ids},
        finish={t: profile.finish[t] for t in project.task_ids},
        durations_used=durations,
        precedence=tuple(project.precedence),
        resource_links=tuple(links),
    )
    logger.info(
        f"Baseline schedule: makespan {schedule.makespan:g} "
        f"(CPM {max((w.early_finish for w in windows.values()), default=0.0):g}), "
        f"{len(links)} resource links"
    )
    return schedule


def audit_capacity(project: Project, schedule: BaselineSchedule) -> List[CapacityViolation]:
    """Time-sweep check of resource loads at every task start"""
    violations = []
    events = sorted(set(schedule.start.values()))
    for rid, capacity in sorted(project.resources.items()):
        for q in events:
            load = sum(
                t.resource_demand.get(rid, 0.0)
                for t in project.tasks
                if schedule.start[t.id] <= q < schedule.finish[t.id]
            )
            if load > capacity + EPS:
                violations.append(CapacityViolation(resource=rid, time=q, load=load, capacity=capacity))
    return violations
