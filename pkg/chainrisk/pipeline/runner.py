from hashlib import sha256
from pathlib import Path
from typing import List, Optional
import logging

from chainrisk import __version__
from chainrisk.assessment import RiskAssessor
from chainrisk.errors import ErrorCode, ParseError, ProjectInvalidError
from chainrisk.ingest import (
    apply_estimates,
    load_document,
    load_project,
    parse_ahp_matrix,
    parse_risk_register,
    parse_rule_base,
    parse_trees,
    read_text,
)
from chainrisk.mitigation import analyze_mitigation
from chainrisk.models.bundle import AnalysisBundle, InputDigest, Provenance, RunConfig
from chainrisk.models.project import Project, RiskFactorMatrix
from chainrisk.models.simulation import SimConfig
from chainrisk.network import validate_project
from chainrisk.pipeline.stages import skip, stage
from chainrisk.scheduling import build_baseline, identify_critical_chain, insert_buffers
from chainrisk.simulation import assess_buffers, run_simulation

logger = logging.getLogger(__name__)

# Project-dependent stages; everything but mitigation needs a valid project
PROJECT_STAGES = ("validate", "assess", "schedule", "simulate")

INPUT_ROLES = (
    ("project", "project_path"),
    ("estimates", "estimates_path"),
    ("risks", "risk_register_path"),
    ("ahp", "ahp_matrix_path"),
    ("rules", "rule_base_path"),
    ("fault_tree", "fault_tree_path"),
)


def _digest(role: str, path: Path) -> InputDigest:
    try:
        data = path.read_bytes()
    except FileNotFoundError as e:
        raise ParseError(ErrorCode.IO, f"input file not found: {path}", location=str(path)) from e
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot read {path}: {e.strerror}", location=str(path)) from e
    return InputDigest(role=role, name=path.name, sha256=sha256(data).hexdigest())


def build_provenance(cfg: RunConfig) -> Provenance:
    """Tool version, seed and a digest of every input; independent of worker count and paths"""
    inputs = [
        _digest(role, getattr(cfg, attr))
        for role, attr in INPUT_ROLES
        if getattr(cfg, attr) is not None
    ]
    return Provenance(
        version=__version__,
        seed=cfg.seed,
        replications=cfg.replications,
        methods=tuple(m.value for m in cfg.methods),
        variance=cfg.variance.value,
        inputs=tuple(inputs),
    )


def _load_project(cfg: RunConfig) -> Project:
    if cfg.project_path is None:
        raise ParseError(ErrorCode.IO, "no project file given (--project)")
    project = load_project(cfg.project_path)
    if cfg.estimates_path is not None:
        project = apply_estimates(project, read_text(cfg.estimates_path), source=cfg.estimates_path.name)
    return project


def _validation_failure(bundle: AnalysisBundle) -> ProjectInvalidError:
    errors = bundle.validation.errors
    first = errors[0]
    codes = sorted({f.code.value for f in errors})
    return ProjectInvalidError(
        first.code,
        f"project has {len(errors)} structural errors ({', '.join(codes)}); first: {first.message}",
        location=first.location or (f"task {first.task_id}" if first.task_id is not None else None),
    )


def _load_register(cfg: RunConfig, project: Project):
    return parse_risk_register(read_text(cfg.risk_register_path), project, source=cfg.risk_register_path.name)


def run_pipeline(cfg: RunConfig) -> AnalysisBundle:
    """
    Run the requested analysis stages in order

    validate -> assess (with a risk register) -> schedule (baseline, chain,
    buffers per method) -> simulate (with a risk register) -> mitigate
    (with a fault tree). Any hard error aborts the run.

    Args:
        cfg: Resolved run configuration

    Returns:
        AnalysisBundle holding every stage result
    """
    logger.info(f"Starting analysis run (stages: {', '.join(cfg.stages)})")
    bundle = AnalysisBundle(provenance=build_provenance(cfg))

    project: Optional[Project] = None
    matrix: Optional[RiskFactorMatrix] = None
    register: List = []

    if any(s in cfg.stages for s in PROJECT_STAGES):
        with stage(bundle, "validate") as record:
            project = _load_project(cfg)
            bundle.validation = validate_project(project)
            record.summary = {
                "tasks": len(project.tasks),
                "arcs": len(project.precedence),
                "errors": len(bundle.validation.errors),
                "warnings": len(bundle.validation.warnings),
            }
            if not bundle.validation.ok:
                raise _validation_failure(bundle)
            for warning in bundle.validation.warnings:
                logger.warning(f"{warning.code.value}: {warning.message}")

    if "assess" in cfg.stages:
        if cfg.risk_register_path is None:
            skip(bundle, "assess", "no risk register")
        else:
            with stage(bundle, "assess") as record:
                register, matrix = _load_register(cfg, project)
                ahp = load_document(cfg.ahp_matrix_path, parse_ahp_matrix) if cfg.ahp_matrix_path else None
                rules = load_document(cfg.rule_base_path, parse_rule_base) if cfg.rule_base_path else None
                assessor = RiskAssessor(ahp, rules)
                bundle.criteria_weights = assessor.weights
                bundle.risk_ranking = tuple(assessor.assess(register))
                record.summary = {
                    "risks": len(register),
                    "max_rcn": bundle.risk_ranking[0].rcn,
                }

    if "schedule" in cfg.stages or "simulate" in cfg.stages:
        with stage(bundle, "schedule") as record:
            baseline = build_baseline(project)
            bundle.plan = identify_critical_chain(baseline)
            for method in cfg.methods:
                bundle.buffered[method.value] = insert_buffers(bundle.plan, project, method, cfg.variance)
            record.summary = {
                "makespan": bundle.plan.makespan,
                "chain_length": len(bundle.plan.critical_chain),
                "feeding_chains": len(bundle.plan.feeding_chains),
                "resource_links": len(baseline.resource_links),
            }

    if "simulate" in cfg.stages:
        if cfg.risk_register_path is None:
            skip(bundle, "simulate", "no risk register")
        else:
            with stage(bundle, "simulate") as record:
                if matrix is None:
                    _, matrix = _load_register(cfg, project)
                sim_cfg = SimConfig(
                    replications=cfg.replications,
                    seed=cfg.seed,
                    deadline=cfg.deadline if cfg.deadline is not None else project.deadline,
                    workers=cfg.workers,
                )
                bundle.simulation = run_simulation(project, matrix, bundle.plan.schedule, sim_cfg)
                if bundle.buffered:
                    bundle.buffer_assessment = assess_buffers(bundle.buffered, bundle.simulation)
                record.summary = {
                    "replications": bundle.simulation.replications,
                    "mean": bundle.simulation.mean,
                    "p90": bundle.simulation.percentiles.p90,
                }

    if "mitigate" in cfg.stages:
        if cfg.fault_tree_path is None:
            skip(bundle, "mitigate", "no fault tree")
        else:
            with stage(bundle, "mitigate") as record:
                fault_tree, event_tree = load_document(cfg.fault_tree_path, parse_trees)
                bundle.mitigation = analyze_mitigation(fault_tree, event_tree)
                record.summary = {
                    "top_event_probability": bundle.mitigation.top_event_probability,
                    "paths": len(bundle.mitigation.path_table),
                }

    logger.info(f"Analysis run completed: {len(bundle.stages)} stages")
    return bundle
