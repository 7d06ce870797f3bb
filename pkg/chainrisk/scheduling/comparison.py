from typing import Dict, Iterable, Optional
import logging

from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.models.project import Project
from chainrisk.models.schedule import BufferMethod, MethodComparison, VarianceAssumption
from chainrisk.scheduling.baseline import build_baseline
from chainrisk.scheduling.buffering import insert_buffers
from chainrisk.scheduling.chain import identify_critical_chain

logger = logging.getLogger(__name__)


def with_safety(project: Project, factor: float) -> Project:
    """Give every task whose estimates collapse to one value est_safe = est_max = factor * est_avg"""
    if factor < 1.0:
        raise AnalysisError(ErrorCode.RANGE, f"safety factor must be >= 1, got {factor}")
    tasks = []
    for task in project.tasks:
        if task.est_safe == task.est_avg and task.est_max == task.est_avg:
            safe = factor * task.est_avg
            task = task.model_copy(update={"est_safe": safe, "est_max": safe})
        tasks.append(task)
    return project.with_tasks(tasks)


def compare_buffer_methods(
    project: Project,
    methods: Iterable = tuple(BufferMethod),
    variance: Optional[VarianceAssumption] = None,
    name: str = "",
) -> MethodComparison:
    """
    Buffer one project with each method over a single leveled plan

    Args:
        project: Valid project with its safety estimates in place
        methods: Buffer methods to size with (BufferMethod or names)
        variance: Activity variance assumption for APD; settings when omitted
        name: Instance label carried into the result

    Returns:
        MethodComparison with the buffered completion per method
    """
    plan = identify_critical_chain(build_baseline(project))
    completions: Dict[BufferMethod, float] = {}
    for method in methods:
        method = BufferMethod.parse(method)
        completions[method] = insert_buffers(plan, project, method, variance).buffered_completion

    comparison = MethodComparison(
        instance=name,
        tasks=len(project.tasks),
        feeding_chains=len(plan.feeding_chains),
        makespan=plan.makespan,
        completions=completions,
    )
    if comparison.cpm_apd_ratio is not None:
        logger.debug(f"{name or 'project'}: C&PM/APD {comparison.cpm_apd_ratio:.4f}")
    return comparison
