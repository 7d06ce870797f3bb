from io import StringIO
from pathlib import Path
from pydantic import ValidationError
from typing import Union
import json
import logging
import pandas as pd

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.ingest.patterson import parse_patterson
from chainrisk.models.project import Project

logger = logging.getLogger(__name__)

ESTIMATE_COLUMNS = ["task_id", "min", "avg", "safe", "max"]


def read_text(path: Union[str, Path]) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ParseError(ErrorCode.IO, f"input file not found: {path}", location=str(path)) from e
    except OSError as e:
        raise ParseError(ErrorCode.IO, f"cannot read {path}: {e}", location=str(path)) from e


def parse_project_json(text: str, source: str = "project") -> Project:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(ErrorCode.MALFORMED, f"invalid JSON: {e.msg}", location=f"{source}:{e.lineno}") from e
    if not isinstance(document, dict) or "tasks" not in document:
        raise ParseError(ErrorCode.MALFORMED, "project document needs a 'tasks' list", location=source)
    document = dict(document)
    document["arcs"] = [tuple(arc) for arc in document.get("arcs", [])]
    try:
        return Project.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ParseError(ErrorCode.MALFORMED, f"{where}: {first['msg']}", location=source) from e


def dump_project_json(project: Project) -> str:
    document = {
        "tasks": [t.model_dump(by_alias=True) for t in project.tasks],
        "arcs": [list(arc) for arc in project.precedence],
        "resources": dict(project.resources),
        "deadline": project.deadline,
    }
    return json.dumps(document, indent=2)


def load_project(path: Union[str, Path]) -> Project:
    """Load a project from JSON (``.json``) or Patterson text (anything else)"""
    path = Path(path)
    text = read_text(path)
    if path.suffix.lower() == ".json":
        project = parse_project_json(text, source=path.name)
    else:
        try:
            project = parse_patterson(text)
        except ParseError as e:
            e.location = f"{path.name}:{e.location}" if e.location else path.name
            raise
    logger.info(f"Loaded project {path.name}: {len(project.tasks)} tasks, {len(project.precedence)} arcs")
    return project


def apply_estimates(project: Project, text: str, source: str = "estimates") -> Project:
    """Override four-point estimates from a ``task_id,min,avg,safe,max`` CSV"""
    try:
        frame = pd.read_csv(StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(ErrorCode.MALFORMED, f"unreadable estimates CSV: {e}", location=source) from e
    if list(frame.columns) != ESTIMATE_COLUMNS:
        raise ParseError(
            ErrorCode.MALFORMED,
            f"estimates header must be {','.join(ESTIMATE_COLUMNS)}",
            location=f"{source}:1",
        )

    tasks = project.task_map()
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        try:
            tid = int(row.task_id)
            values = [float(getattr(row, c)) for c in ESTIMATE_COLUMNS[1:]]
        except ValueError as e:
            raise ParseError(ErrorCode.MALFORMED, f"non-numeric estimate: {e}", location=f"{source}:{line}") from e
        if tid not in tasks:
            raise ParseError(ErrorCode.UNKNOWN_TASK, f"task {tid} is not in the project", location=f"{source}:{line}")
        if any(v < 0 for v in values):
            raise ParseError(ErrorCode.RANGE, f"estimates for task {tid} must be >= 0", location=f"{source}:{line}")
        lo, avg, safe, hi = values
        tasks[tid] = tasks[tid].model_copy(update={"est_min": lo, "est_avg": avg, "est_safe": safe, "est_max": hi})

    logger.info(f"Applied estimates for {len(frame)} tasks")
    return project.with_tasks([tasks[t] for t in project.task_ids])
