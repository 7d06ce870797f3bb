from typing import Dict, Optional, Tuple
import numpy as np

from chainrisk.models.project import Project, Task


def random_project(
    rng: np.random.Generator,
    n_tasks: int,
    arc_density: float,
    backbone: bool = True,
    avg_range: Tuple[float, float] = (2.0, 10.0),
    safety_factor: Tuple[float, float] = (1.5, 2.0),
    resources: Optional[Dict[str, float]] = None,
    max_demand: int = 1,
    integral: bool = False,
) -> Project:
    """
    Random acyclic project for property checks and method comparisons

    Arcs only run from lower to higher ids. With ``backbone`` every task i
    precedes i+1, so the whole network is one long chain plus shortcut arcs;
    without it arcs are drawn uniformly from all forward pairs.

    Args:
        rng: Seeded numpy generator
        n_tasks: Number of tasks (ids 1..n)
        arc_density: Target arcs per task
        backbone: Chain the tasks in id order before adding random arcs
        avg_range: Uniform range of the average estimate A
        safety_factor: S = A * uniform(safety_factor)
        resources: Capacities; each task demands 0..max_demand of each
        max_demand: Upper bound of a task's demand per resource
        integral: Round A and S to whole time units

    Returns:
        Project with tasks 1..n
    """
    target = int(round(arc_density * n_tasks))
    arcs = set()
    if backbone:
        arcs.update((i, i + 1) for i in range(1, n_tasks))

    candidates = [(i, j) for i in range(1, n_tasks + 1) for j in range(i + 1, n_tasks + 1) if (i, j) not in arcs]
    missing = max(0, min(target - len(arcs), len(candidates)))
    if missing:
        picks = rng.choice(len(candidates), size=missing, replace=False)
        arcs.update(candidates[int(k)] for k in picks)

    tasks = []
    for tid in range(1, n_tasks + 1):
        avg = float(rng.uniform(*avg_range))
        safe = avg * float(rng.uniform(*safety_factor))
        if integral:
            avg, safe = float(round(avg)), float(round(safe))
            safe = max(safe, avg)
        demand = {}
        for rid, capacity in (resources or {}).items():
            demand[rid] = float(rng.integers(0, min(max_demand, int(capacity)) + 1))
        tasks.append(
            Task(
                id=tid,
                name=f"T{tid}",
                est_min=0.75 * avg if not integral else float(int(0.75 * avg)),
                est_avg=avg,
                est_safe=safe,
                est_max=1.25 * safe if not integral else float(round(1.25 * safe)),
                resource_demand=demand,
            )
        )
    return Project(tasks=tuple(tasks), precedence=tuple(sorted(arcs)), resources=dict(resources or {}))
