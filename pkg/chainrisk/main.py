from pathlib import Path
from pydantic import ValidationError
from typing import List, Optional
import argparse
import json
import logging
import sys

from chainrisk import __version__
from chainrisk.config import settings
from chainrisk.errors import ChainRiskError, ErrorCode, ParseError
from chainrisk.ingest import read_text
from chainrisk.models.bundle import FORMATS, STAGES, RunConfig
from chainrisk.models.schedule import BufferMethod, VarianceAssumption
from chainrisk.pipeline import compare_instances, render_comparison, render_report, run_pipeline

logger = logging.getLogger(__name__)

LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

COMMAND_STAGES = {
    "validate": ("validate",),
    "assess": ("validate", "assess"),
    "schedule": ("validate", "schedule"),
    "simulate": ("validate", "schedule", "simulate"),
    "mitigate": ("mitigate",),
    "run": STAGES,
}

# argparse dest -> RunConfig field
FLAG_FIELDS = {
    "project": "project_path",
    "estimates": "estimates_path",
    "risks": "risk_register_path",
    "ahp": "ahp_matrix_path",
    "rules": "rule_base_path",
    "fault_tree": "fault_tree_path",
    "variance": "variance",
    "reps": "replications",
    "seed": "seed",
    "deadline": "deadline",
    "workers": "workers",
    "out": "output_dir",
    "format": "formats",
}


def setup_logging():
    # Diagnostics go to stderr; stdout stays free for reports
    logging.basicConfig(
        level=LOG_LEVELS[settings.chain_log],
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainrisk",
        description="Critical chain scheduling with fuzzy FMEA risk assessment and Monte Carlo schedule risk analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project", type=Path, help="project JSON or Patterson file")
    common.add_argument("--estimates", type=Path, help="estimates CSV (task_id,min,avg,safe,max)")
    common.add_argument("--risks", type=Path, help="risk register CSV")
    common.add_argument("--ahp", type=Path, help="fuzzy AHP comparison matrix JSON")
    common.add_argument("--rules", type=Path, help="rule base JSON")
    common.add_argument("--fault-tree", dest="fault_tree", type=Path, help="fault tree / event tree JSON")
    common.add_argument("--method", choices=[m.value for m in BufferMethod] + ["all"])
    common.add_argument("--variance", choices=["rsem_half_u", "triangular"])
    common.add_argument("--reps", type=int, help="Monte Carlo replications")
    common.add_argument("--seed", type=int)
    common.add_argument("--deadline", type=float)
    common.add_argument("--workers", type=int, help="simulation worker processes")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", nargs="+", choices=FORMATS)
    common.add_argument("--config", type=Path, help="JSON document with RunConfig keys")
    common.add_argument("--dump-samples", dest="dump_samples", action="store_true", default=None)

    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMAND_STAGES:
        commands.add_parser(name, parents=[common], help=f"{name} stage" if name != "run" else "full pipeline")

    compare = commands.add_parser("compare", help="buffered completion per method over a set of instances")
    compare.add_argument("instances", nargs="+", type=Path, help="project JSON or Patterson files")
    compare.add_argument("--method", choices=[m.value for m in BufferMethod] + ["all"], default="all")
    compare.add_argument("--variance", choices=["rsem_half_u", "triangular"])
    compare.add_argument("--safety-factor", dest="safety_factor", type=float, help="safe / average ratio for single-duration tasks")
    compare.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    return parser


def _methods(value: str):
    if value == "all":
        return tuple(BufferMethod)
    return (BufferMethod.parse(value),)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """settings defaults < --config document < explicit flags"""
    values = {
        "methods": _methods(settings.buffer.method),
        "variance": settings.buffer.variance,
        "replications": settings.simulation.replications,
        "seed": settings.simulation.seed,
        "workers": settings.simulation.workers,
    }

    if args.config is not None:
        try:
            document = json.loads(read_text(args.config))
        except json.JSONDecodeError as e:
            raise ParseError(ErrorCode.INVALID_CONFIG, f"invalid JSON: {e.msg}", location=f"{args.config}:{e.lineno}") from e
        if not isinstance(document, dict):
            raise ParseError(ErrorCode.INVALID_CONFIG, "config must be a JSON object", location=str(args.config))
        if isinstance(document.get("methods"), str):
            document["methods"] = _methods(document["methods"])
        document.pop("stages", None)
        values.update(document)

    for dest, field in FLAG_FIELDS.items():
        value = getattr(args, dest)
        if value is not None:
            values[field] = tuple(value) if field == "formats" else value
    if args.method is not None:
        values["methods"] = _methods(args.method)
    if args.dump_samples:
        values["dump_samples"] = True
    values["stages"] = COMMAND_STAGES[args.command]

    try:
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ParseError(ErrorCode.INVALID_CONFIG, f"{where}: {first['msg']}", location="config") from e


def run_comparison(args: argparse.Namespace) -> Path:
    variance = VarianceAssumption(args.variance or settings.buffer.variance)
    safety_factor = settings.buffer.safety_factor if args.safety_factor is None else args.safety_factor
    results = compare_instances(args.instances, _methods(args.method), variance, safety_factor)
    render_comparison(results, args.out)
    return args.out


def report_error(error: ChainRiskError):
    sys.stderr.write(json.dumps({"error": error.to_dict()}, sort_keys=True) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    args = build_parser().parse_args(argv)

    try:
        if args.command == "compare":
            output_dir = run_comparison(args)
        else:
            cfg = resolve_config(args)
            bundle = run_pipeline(cfg)
            render_report(bundle, cfg.output_dir, cfg.formats, cfg.dump_samples)
            output_dir = cfg.output_dir
    except ChainRiskError as e:
        report_error(e)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure")
        report_error(ChainRiskError(ErrorCode.INTERNAL, str(e)))
        return 4

    logger.info(f"Completed '{args.command}'; reports in {output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
