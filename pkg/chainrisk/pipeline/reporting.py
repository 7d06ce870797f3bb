from pathlib import Path
from typing import Iterable, List, Optional
import logging
import pandas as pd

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.mitigation import format_mitigation_table
from chainrisk.models.bundle import FORMATS, AnalysisBundle
from chainrisk.models.schedule import BufferedSchedule, BufferMethod, MethodComparison
from chainrisk.simulation import histogram

logger = logging.getLogger(__name__)

PROJECT_BUFFER_LABEL = "PB"


def feeding_buffer_label(index: int, merge_task: int) -> str:
    return f"FB{index}->{merge_task}"


def _write(path: Path, text: str):
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot write {path}: {e.strerror}", location=str(path)) from e


def _write_frame(path: Path, frame: pd.DataFrame):
    try:
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot write {path}: {e.strerror}", location=str(path)) from e


def risks_frame(bundle: AnalysisBundle) -> pd.DataFrame:
    rows = [
        {"risk_id": a.risk_id, "ai": a.ai, "rcn": a.rcn, "rank": a.rank}
        for a in bundle.risk_ranking or ()
    ]
    return pd.DataFrame(rows, columns=["risk_id", "ai", "rcn", "rank"])


def schedule_frame(buffered: BufferedSchedule) -> pd.DataFrame:
    """Gantt rows: tasks, then feeding buffers ahead of their join task, then the project buffer"""
    plan = buffered.plan
    sched = plan.schedule
    rows = [
        {"task": str(tid), "start": sched.start[tid], "finish": sched.finish[tid], "kind": "task"}
        for tid in sorted(sched.start, key=lambda t: (sched.start[t], t))
    ]
    for i, fc in enumerate(plan.feeding_chains):
        end = sched.start[fc.joins]
        rows.append(
            {
                "task": feeding_buffer_label(i, fc.merge_task),
                "start": end - buffered.feeding_buffers[i],
                "finish": end,
                "kind": "feeding_buffer",
            }
        )
    rows.append(
        {
            "task": PROJECT_BUFFER_LABEL,
            "start": plan.makespan,
            "finish": buffered.buffered_completion,
            "kind": "project_buffer",
        }
    )
    return pd.DataFrame(rows, columns=["task", "start", "finish", "kind"])


def buffers_frame(bundle: AnalysisBundle) -> pd.DataFrame:
    rows = []
    for method, buffered in bundle.buffered.items():
        for i, fc in enumerate(buffered.plan.feeding_chains):
            rows.append({"chain": feeding_buffer_label(i, fc.merge_task), "method": method, "size": buffered.feeding_buffers[i]})
        rows.append({"chain": PROJECT_BUFFER_LABEL, "method": method, "size": buffered.project_buffer})
    return pd.DataFrame(rows, columns=["chain", "method", "size"])


def histogram_frame(bundle: AnalysisBundle) -> pd.DataFrame:
    return pd.DataFrame(
        [b.model_dump() for b in histogram(bundle.simulation)],
        columns=["bin_lower", "bin_upper", "count"],
    )


def cpm_apd_ratio(bundle: AnalysisBundle) -> Optional[float]:
    cpm = bundle.buffered.get(BufferMethod.CPM_CUT_PASTE.value)
    apd = bundle.buffered.get(BufferMethod.APD.value)
    if cpm is None or apd is None or apd.buffered_completion == 0:
        return None
    return cpm.buffered_completion / apd.buffered_completion


def summary_text(bundle: AnalysisBundle) -> str:
    prov = bundle.provenance
    lines = [f"{prov.tool} {prov.version}  seed={prov.seed}  replications={prov.replications}"]
    for digest in prov.inputs:
        lines.append(f"  {digest.role}: {digest.name} sha256={digest.sha256[:16]}")
    lines.append("")

    if bundle.validation is not None:
        lines.append(
            f"validation: {'ok' if bundle.validation.ok else 'failed'} "
            f"({len(bundle.validation.errors)} errors, {len(bundle.validation.warnings)} warnings)"
        )

    if bundle.risk_ranking:
        w = bundle.criteria_weights
        lines.append(f"criteria weights: cost={w.tpc:.4f} time={w.tpt:.4f} quality={w.tpq:.4f}")
        lines.append("risk ranking:")
        for a in bundle.risk_ranking:
            lines.append(f"  {a.rank:>3}. {a.risk_id:<12} RCN={a.rcn:.4f} AI={a.ai:.4f} {a.level.value}")
    else:
        lines.append("risk assessment: skipped")

    if bundle.plan is not None:
        lines.append(f"critical chain: {' -> '.join(str(t) for t in bundle.plan.critical_chain)}")
        lines.append(f"makespan: {bundle.plan.makespan:.4f}")
        lines.append(f"feeding chains: {len(bundle.plan.feeding_chains)}")
        for fc in bundle.plan.feeding_chains:
            lines.append(f"  {list(fc.tasks)} -> {fc.merge_task}")
        lines.append("buffered completion:")
        for method, buffered in bundle.buffered.items():
            lines.append(
                f"  {method:<5} project buffer={buffered.project_buffer:.4f} "
                f"completion={buffered.buffered_completion:.4f}"
            )
        ratio = cpm_apd_ratio(bundle)
        lines.append(f"C&PM/APD ratio: {ratio:.6f}" if ratio is not None else "C&PM/APD ratio: n/a")

    if bundle.simulation is not None:
        sim = bundle.simulation
        pct = sim.percentiles
        lines.append(
            f"simulation: mean={sim.mean:.4f} std={sim.std:.4f} min={sim.minimum:.4f} max={sim.maximum:.4f}"
        )
        lines.append(f"  p10={pct.p10:.4f} p50={pct.p50:.4f} p80={pct.p80:.4f} p90={pct.p90:.4f} p95={pct.p95:.4f}")
        if sim.deadline_probability is not None:
            lines.append(f"  P(makespan <= {sim.deadline:g}) = {sim.deadline_probability:.4f}")
        if bundle.buffer_assessment is not None:
            ba = bundle.buffer_assessment
            for row in ba.methods:
                lines.append(f"  P(makespan <= {row.method} completion) = {row.probability:.4f}")
            lines.append(f"  recommended buffer method (target {ba.target_probability:.2f}): {ba.recommended or 'none'}")
    else:
        lines.append("simulation: skipped")

    if bundle.mitigation is not None:
        lines.append("")
        lines.append(format_mitigation_table(bundle.mitigation).rstrip("\n"))
    else:
        lines.append("mitigation: skipped")

    return "\n".join(lines) + "\n"


def render_report(
    bundle: AnalysisBundle,
    output_dir: Path,
    formats: Iterable[str] = FORMATS,
    dump_samples: bool = False,
) -> List[Path]:
    """
    Write the report files for a bundle

    json: bundle.json, mitigation.json. csv: risks.csv, schedule.csv,
    buffers.csv, makespan_hist.csv. text: summary.txt. Sections whose stage
    did not run are left out.

    Returns:
        Paths written, in write order
    """
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot create {output_dir}: {e.strerror}", location=str(output_dir)) from e

    formats = set(formats)
    written: List[Path] = []

    def emit(name: str, content):
        path = output_dir / name
        if isinstance(content, pd.DataFrame):
            _write_frame(path, content)
        else:
            _write(path, content)
        written.append(path)

    if "json" in formats:
        emit("bundle.json", bundle.model_dump_json(indent=2) + "\n")
        if bundle.mitigation is not None:
            emit("mitigation.json", bundle.mitigation.model_dump_json(indent=2) + "\n")

    if "csv" in formats:
        if bundle.risk_ranking:
            emit("risks.csv", risks_frame(bundle))
        if bundle.buffered:
            emit("schedule.csv", schedule_frame(next(iter(bundle.buffered.values()))))
            emit("buffers.csv", buffers_frame(bundle))
        if bundle.simulation is not None:
            emit("makespan_hist.csv", histogram_frame(bundle))

    if "text" in formats:
        emit("summary.txt", summary_text(bundle))
        if bundle.mitigation is not None:
            emit("mitigation.txt", format_mitigation_table(bundle.mitigation))

    if dump_samples and bundle.simulation is not None:
        emit("makespans.txt", "".join(f"{m!r}\n" for m in bundle.simulation.makespans))

    logger.info(f"Wrote {len(written)} report files to {output_dir}")
    return written


def comparison_frame(results: List[MethodComparison]) -> pd.DataFrame:
    methods = [m for m in BufferMethod if any(m in r.completions for r in results)]
    rows = []
    for r in results:
        row = {"instance": r.instance, "tasks": r.tasks, "feeding_chains": r.feeding_chains, "makespan": r.makespan}
        row.update({m.value: r.completions.get(m) for m in methods})
        row["cpm_apd_ratio"] = r.cpm_apd_ratio
        rows.append(row)
    columns = ["instance", "tasks", "feeding_chains", "makespan"] + [m.value for m in methods] + ["cpm_apd_ratio"]
    return pd.DataFrame(rows, columns=columns)


def comparison_text(results: List[MethodComparison]) -> str:
    lines = [f"instances: {len(results)}"]
    ratios = [r.cpm_apd_ratio for r in results if r.cpm_apd_ratio is not None]
    if ratios:
        lines.append(f"C&PM/APD ratio: mean {sum(ratios) / len(ratios):.6f} min {min(ratios):.6f} max {max(ratios):.6f}")
        lines.append(f"C&PM >= APD: {sum(1 for x in ratios if x >= 1.0)} of {len(ratios)}")
    else:
        lines.append("C&PM/APD ratio: n/a")
    return "\n".join(lines) + "\n"


def render_comparison(results: List[MethodComparison], output_dir: Path) -> List[Path]:
    """comparison.csv (one row per instance) and comparison.txt"""
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot create {output_dir}: {e.strerror}", location=str(output_dir)) from e
    _write_frame(output_dir / "comparison.csv", comparison_frame(results))
    _write(output_dir / "comparison.txt", comparison_text(results))
    return [output_dir / "comparison.csv", output_dir / "comparison.txt"]
