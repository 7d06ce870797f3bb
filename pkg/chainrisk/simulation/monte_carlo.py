from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import fsum, sqrt
from typing import Dict, List, Mapping, Optional, Tuple
import logging
import numpy as np

from chainrisk.config import settings
from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.models.project import Project, RiskFactorMatrix, Task
from chainrisk.models.schedule import BaselineSchedule, BufferedSchedule
from chainrisk.models.simulation import (
    BufferAdequacy,
    BufferAssessment,
    HistogramBin,
    Percentiles,
    SimConfig,
    SimulationResult,
)
from chainrisk.network.cpm import topological_order

logger = logging.getLogger(__name__)

PERCENTILES = (10, 50, 80, 90, 95)


def sample_duration(task: Task, rf_row: Mapping[str, float], draws: Mapping[str, float]) -> float:
    """
    One risk-driven duration sample

    duration = min + (max - min) * clamp(sum_n rf_n * r_n, 0, 1), so risks only
    push the duration from the optimistic toward the pessimistic estimate.
    """
    exposure = fsum(rf * draws[rid] for rid, rf in rf_row.items())
    exposure = min(max(exposure, 0.0), 1.0)
    return min(task.est_max, task.est_min + (task.est_max - task.est_min) * exposure)


@dataclass(frozen=True)
class _NetworkArrays:
    """Topologically ordered task data shared by every block"""

    order: Tuple[int, ...]
    lo: np.ndarray  # est_min per ordered task
    hi: np.ndarray  # est_max per ordered task
    weights: np.ndarray  # (tasks, risks) risk factors
    preds: Tuple[Tuple[int, ...], ...]  # positions into order
    succs: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class _Block:
    seed: int
    index: int
    size: int
    tolerance: float
    network: _NetworkArrays


def _network_arrays(project: Project, matrix: RiskFactorMatrix, baseline: BaselineSchedule) -> _NetworkArrays:
    arcs = list(baseline.all_arcs())
    order, _ = topological_order(project.task_ids, arcs)
    position = {t: i for i, t in enumerate(order)}
    tasks = project.task_map()

    weights = np.zeros((len(order), len(matrix.risk_ids)))
    column = {rid: j for j, rid in enumerate(matrix.risk_ids)}
    for (tid, rid), rf in matrix.entries.items():
        if tid not in position:
            raise AnalysisError(ErrorCode.UNKNOWN_TASK, f"risk factor for unknown task {tid}", location=f"rf:{tid}")
        if rid not in column:
            raise AnalysisError(ErrorCode.UNKNOWN_RISK, f"risk factor for unknown risk '{rid}'", location=f"rf:{tid}")
        weights[position[tid], column[rid]] = rf

    preds: List[List[int]] = [[] for _ in order]
    succs: List[List[int]] = [[] for _ in order]
    for a, b in set(arcs):
        preds[position[b]].append(position[a])
        succs[position[a]].append(position[b])

    return _NetworkArrays(
        order=tuple(order),
        lo=np.array([tasks[t].est_min for t in order], dtype=float),
        hi=np.array([tasks[t].est_max for t in order], dtype=float),
        weights=weights,
        preds=tuple(tuple(sorted(p)) for p in preds),
        succs=tuple(tuple(sorted(s)) for s in succs),
    )


def _block_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _simulate_block(block: _Block) -> Tuple[np.ndarray, np.ndarray]:
    """Makespans and per-task zero-slack counts for one block of replications"""
    net = block.network
    n_tasks, n_risks = net.weights.shape

    # One variate per risk per replication, shared by every task the risk touches
    draws = _block_rng(block.seed, block.index).random((block.size, n_risks))
    exposure = np.clip(draws @ net.weights.T, 0.0, 1.0) if n_risks else np.zeros((block.size, n_tasks))
    durations = np.minimum(net.hi, net.lo + (net.hi - net.lo) * exposure)

    early_start = np.zeros((block.size, n_tasks))
    early_finish = np.zeros((block.size, n_tasks))
    for i in range(n_tasks):
        if net.preds[i]:
            early_start[:, i] = early_finish[:, list(net.preds[i])].max(axis=1)
        early_finish[:, i] = early_start[:, i] + durations[:, i]
    makespans = early_finish.max(axis=1) if n_tasks else np.zeros(block.size)

    late_start = np.zeros((block.size, n_tasks))
    for i in reversed(range(n_tasks)):
        if net.succs[i]:
            late_finish = late_start[:, list(net.succs[i])].min(axis=1)
        else:
            late_finish = makespans
        late_start[:, i] = late_finish - durations[:, i]

    critical = (late_start - early_start) <= block.tolerance * np.maximum(1.0, makespans)[:, None]
    return makespans, critical.sum(axis=0).astype(np.int64)


def _blocks(cfg: SimConfig, network: _NetworkArrays) -> List[_Block]:
    size = settings.simulation.block_size
    count = -(-cfg.replications // size)
    return [
        _Block(
            seed=cfg.seed,
            index=b,
            size=min(size, cfg.replications - b * size),
            tolerance=settings.simulation.critical_tolerance,
            network=network,
        )
        for b in range(count)
    ]


def _moments(makespans: np.ndarray) -> Tuple[float, float]:
    first = float(makespans[0])
    if float(makespans.max()) == float(makespans.min()):
        return first, 0.0
    values = makespans.tolist()
    mean = fsum(values) / len(values)
    var = fsum((x - mean) ** 2 for x in values) / len(values)
    return mean, sqrt(var)


def run_simulation(
    project: Project,
    matrix: RiskFactorMatrix,
    baseline: BaselineSchedule,
    cfg: SimConfig,
) -> SimulationResult:
    """
    Monte Carlo completion-time distribution of the leveled schedule

    Replications are split into fixed-size blocks, each drawing from its own
    stream keyed by (seed, block index). Resource contention stays frozen to
    the baseline's resource links. Output depends only on (seed,
    replications), never on the worker count.

    Args:
        project: Validated project
        matrix: Activity/risk factor matrix (may be empty)
        baseline: Schedule built from the same project
        cfg: Replications, seed, optional deadline and worker count

    Returns:
        SimulationResult with the full makespan sample
    """
    if set(baseline.start) != set(project.task_ids):
        raise AnalysisError(ErrorCode.UNKNOWN_TASK, "baseline schedule was built from a different project")

    network = _network_arrays(project, matrix, baseline)
    blocks = _blocks(cfg, network)
    logger.info(
        f"Simulating {cfg.replications} replications (seed {cfg.seed}) over "
        f"{len(network.order)} tasks and {len(matrix.risk_ids)} risks in {len(blocks)} blocks, "
        f"{cfg.workers} workers"
    )

    if cfg.workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(blocks))) as executor:
            outputs = list(executor.map(_simulate_block, blocks))
    else:
        outputs = [_simulate_block(b) for b in blocks]

    makespans = np.concatenate([m for m, _ in outputs])
    counts = np.sum([c for _, c in outputs], axis=0)

    mean, std = _moments(makespans)
    quantiles = np.maximum.accumulate(np.percentile(makespans, PERCENTILES))
    zero_slack = {tid: int(counts[i]) for i, tid in enumerate(network.order)}
    zero_slack = {tid: zero_slack[tid] for tid in sorted(zero_slack)}

    sample = tuple(float(x) for x in makespans)
    result = SimulationResult(
        replications=cfg.replications,
        seed=cfg.seed,
        makespans=sample,
        mean=mean,
        std=std,
        minimum=float(makespans.min()),
        maximum=float(makespans.max()),
        percentiles=Percentiles(**{f"p{q}": float(v) for q, v in zip(PERCENTILES, quantiles)}),
        zero_slack_counts=zero_slack,
        criticality_index={tid: c / cfg.replications for tid, c in zero_slack.items()},
        deadline=cfg.deadline,
        deadline_probability=None if cfg.deadline is None else _fraction_within(makespans, cfg.deadline),
    )
    logger.info(f"Simulated makespan mean {result.mean:.3f}, std {result.std:.3f}, p90 {result.percentiles.p90:.3f}")
    return result


def _fraction_within(makespans: np.ndarray, deadline: float) -> float:
    return float(np.count_nonzero(makespans <= deadline)) / len(makespans)


def deadline_probability(result: SimulationResult, deadline: float) -> float:
    """Fraction of replications finishing no later than ``deadline``"""
    return _fraction_within(np.asarray(result.makespans), deadline)


def criticality_indices(result: SimulationResult) -> Dict[int, float]:
    return {tid: count / result.replications for tid, count in result.zero_slack_counts.items()}


def histogram(result: SimulationResult, bins: Optional[int] = None) -> List[HistogramBin]:
    """Equal-width bins over [min, max]; a single bin when every sample is equal"""
    bins = bins or settings.simulation.histogram_bins
    if result.maximum == result.minimum:
        return [HistogramBin(bin_lower=result.minimum, bin_upper=result.maximum, count=result.replications)]
    counts, edges = np.histogram(np.asarray(result.makespans), bins=bins, range=(result.minimum, result.maximum))
    return [
        HistogramBin(bin_lower=float(edges[i]), bin_upper=float(edges[i + 1]), count=int(counts[i]))
        for i in range(len(counts))
    ]


def assess_buffers(
    buffered: Mapping[str, BufferedSchedule],
    result: SimulationResult,
    target: Optional[float] = None,
) -> BufferAssessment:
    """
    Probability that each buffered completion is met

    The recommended method is the one with the shortest buffered completion
    whose probability reaches ``target``; None when no method does.
    """
    target = settings.buffer_target_probability if target is None else target
    rows = [
        BufferAdequacy(
            method=name,
            buffered_completion=schedule.buffered_completion,
            probability=deadline_probability(result, schedule.buffered_completion),
        )
        for name, schedule in buffered.items()
    ]
    adequate = [r for r in rows if r.probability >= target]
    recommended = min(adequate, key=lambda r: (r.buffered_completion, r.method)).method if adequate else None
    if recommended is None and rows:
        logger.info(f"No buffer method reaches the {target:.0%} completion target")
    return BufferAssessment(target_probability=target, methods=tuple(rows), recommended=recommended)
