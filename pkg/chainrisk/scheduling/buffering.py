from math import fsum
from typing import Dict, List, Optional, Set, Tuple
import logging

from chainrisk.buffers.sizing import ChainEstimates, FeedingSubnetwork, activity_variance, strategy_for
from chainrisk.models.project import Project
from chainrisk.models.schedule import (
    BufferedSchedule,
    CriticalChainPlan,
    FeedingChain,
    VarianceAssumption,
)
from chainrisk.network.cpm import topological_order

logger = logging.getLogger(__name__)


def _subnetwork_tasks(plan: CriticalChainPlan, index: int) -> Set[int]:
    """Tasks of a feeding chain plus every chain that joins it, transitively"""
    members = set(plan.feeding_chains[index].tasks)
    grew = True
    while grew:
        grew = False
        for fc in plan.feeding_chains:
            if fc.joins in members and not members.issuperset(fc.tasks):
                members.update(fc.tasks)
                grew = True
    return members


def _longest_path_to(
    terminal: int,
    members: Set[int],
    arcs: List[Tuple[int, int]],
    durations: Dict[int, float],
) -> Tuple[int, ...]:
    """Longest path inside ``members`` ending at ``terminal``; ties take smaller ids"""
    inner = [(a, b) for a, b in arcs if a in members and b in members]
    order, g = topological_order(members, inner)
    length: Dict[int, float] = {}
    back: Dict[int, Optional[int]] = {}
    for t in order:
        best = None
        for p in sorted(g.predecessors(t)):
            if best is None or length[p] > length[best]:
                best = p
        back[t] = best
        length[t] = durations[t] + (length[best] if best is not None else 0.0)

    path = [terminal]
    while back[path[-1]] is not None:
        path.append(back[path[-1]])
    return tuple(reversed(path))


def feeding_subnetwork(
    project: Project,
    plan: CriticalChainPlan,
    index: int,
    variance: Optional[VarianceAssumption] = None,
) -> FeedingSubnetwork:
    """
    Sub-network feeding the critical chain through feeding chain ``index``

    T_pr counts precedence arcs internal to the sub-network plus its single
    merge arc; the longest path ends at the chain's last task.
    """
    fc = plan.feeding_chains[index]
    members = _subnetwork_tasks(plan, index)
    arcs = list(project.precedence)
    internal = sum(1 for a, b in arcs if a in members and b in members)
    tasks = project.task_map()
    return FeedingSubnetwork(
        t_n=len(members),
        t_pr=internal + 1,
        longest_path=_longest_path_to(fc.tasks[-1], members, arcs, project.durations("est_avg")),
        variances={t: activity_variance(tasks[t], variance) for t in sorted(members)},
    )


def project_subnetwork(
    project: Project,
    plan: CriticalChainPlan,
    variance: Optional[VarianceAssumption] = None,
) -> FeedingSubnetwork:
    """Whole network as the APD input for the project buffer; the chain is the longest path"""
    tasks = project.task_map()
    return FeedingSubnetwork(
        t_n=max(1, len(project.tasks)),
        t_pr=len(project.precedence),
        longest_path=plan.critical_chain,
        variances={t: activity_variance(tasks[t], variance) for t in plan.critical_chain},
    )


def _latest_start(plan: CriticalChainPlan, fc: FeedingChain, buffer: float, project: Project) -> float:
    durations = project.durations("est_avg")
    return plan.schedule.start[fc.joins] - buffer - fsum(durations[t] for t in fc.tasks)


def insert_buffers(
    plan: CriticalChainPlan,
    project: Project,
    method,
    variance: Optional[VarianceAssumption] = None,
) -> BufferedSchedule:
    """
    Size feeding and project buffers with one method

    Feeding buffers sit at the end of each feeding chain, before the task it
    joins; their insertion only moves the chain's latest allowable start.
    The project buffer follows the last critical-chain task.

    Args:
        plan: Critical chain plan of the leveled schedule
        project: Project the plan was built from
        method: cpm, rsem or apd (BufferMethod or its name)
        variance: Activity variance assumption for APD; settings when omitted

    Returns:
        BufferedSchedule with buffered_completion = makespan + project buffer
    """
    strategy = strategy_for(method)
    tasks = project.task_map()

    feeding_buffers: Dict[int, float] = {}
    latest_starts: Dict[int, float] = {}
    for i, fc in enumerate(plan.feeding_chains):
        chain = ChainEstimates.from_tasks([tasks[t] for t in fc.tasks])
        sub = feeding_subnetwork(project, plan, i, variance)
        size = max(0.0, strategy.size(chain, sub))
        feeding_buffers[i] = size
        latest_starts[i] = _latest_start(plan, fc, size, project)

    if plan.critical_chain:
        chain = ChainEstimates.from_tasks([tasks[t] for t in plan.critical_chain])
        project_buffer = max(0.0, strategy.size(chain, project_subnetwork(project, plan, variance)))
    else:
        project_buffer = 0.0

    buffered = BufferedSchedule(
        plan=plan,
        method=strategy.method,
        feeding_buffers=feeding_buffers,
        feeding_latest_starts=latest_starts,
        project_buffer=project_buffer,
        buffered_completion=plan.makespan + project_buffer,
    )
    logger.info(
        f"{strategy.get_name()}: project buffer {project_buffer:.3f}, "
        f"buffered completion {buffered.buffered_completion:.3f}, "
        f"{len(feeding_buffers)} feeding buffers"
    )
    return buffered
