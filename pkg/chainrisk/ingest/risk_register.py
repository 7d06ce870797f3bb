from io import StringIO
from typing import Dict, List, Optional, Tuple
import logging
import re
import pandas as pd

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.models.project import Project, RiskEvent, RiskFactorMatrix

logger = logging.getLogger(__name__)

REGISTER_COLUMNS = ["risk_id", "description", "p", "ic", "ti", "iq", "d"]
RF_COLUMN = re.compile(r"rf:(\d+)")

# CSV column -> RiskEvent field
SCORE_FIELDS = {
    "p": "p",
    "ic": "impact_cost",
    "ti": "impact_time",
    "iq": "impact_quality",
    "d": "d",
}


def _number(value: str, column: str, where: str) -> float:
    try:
        return float(value)
    except ValueError as e:
        raise ParseError(
            ErrorCode.MALFORMED,
            f"column '{column}' holds non-numeric value '{value}'",
            location=where,
        ) from e


def parse_risk_register(
    text: str, project: Optional[Project] = None, source: str = "risks"
) -> Tuple[List[RiskEvent], RiskFactorMatrix]:
    """
    Read the risk register CSV

    Header: ``risk_id,description,p,ic,ti,iq,d,rf:<task-id>,...``. Score
    columns lie in [1, 10]; RF cells are blank or in [0, 1].

    Args:
        text: CSV content
        project: When given, RF columns must reference its tasks
        source: Name used in error locations

    Returns:
        (risk events in file order, activity-risk factor matrix)
    """
    try:
        frame = pd.read_csv(StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise ParseError(ErrorCode.MALFORMED, "risk register is empty", location=f"{source}:1") from e
    except pd.errors.ParserError as e:
        raise ParseError(ErrorCode.MALFORMED, f"unreadable risk register: {e}", location=source) from e

    columns = [c.strip() for c in frame.columns]
    if columns[: len(REGISTER_COLUMNS)] != REGISTER_COLUMNS:
        raise ParseError(
            ErrorCode.MALFORMED,
            f"register header must start with {','.join(REGISTER_COLUMNS)}",
            location=f"{source}:1",
        )

    rf_columns: Dict[str, int] = {}
    for column in columns[len(REGISTER_COLUMNS):]:
        match = RF_COLUMN.fullmatch(column)
        if not match:
            raise ParseError(ErrorCode.MALFORMED, f"unexpected column '{column}'", location=f"{source}:1")
        task_id = int(match.group(1))
        if project is not None and task_id not in project.task_ids:
            raise ParseError(
                ErrorCode.UNKNOWN_TASK,
                f"column '{column}' references task {task_id} which is not in the project",
                location=f"{source}:1",
            )
        rf_columns[column] = task_id
    frame.columns = columns

    events: List[RiskEvent] = []
    entries: Dict[Tuple[int, str], float] = {}
    for offset, row in enumerate(frame.to_dict(orient="records")):
        line = offset + 2
        risk_id = row["risk_id"].strip()
        if not risk_id:
            raise ParseError(ErrorCode.MALFORMED, "risk_id is blank", location=f"{source}:{line}")
        if any(e.id == risk_id for e in events):
            raise ParseError(ErrorCode.MALFORMED, f"duplicate risk_id '{risk_id}'", location=f"{source}:{line}")

        scores = {}
        for column, field in SCORE_FIELDS.items():
            where = f"{source}:{line}:{column}"
            value = _number(row[column], column, where)
            if not 1.0 <= value <= 10.0:
                raise ParseError(ErrorCode.RANGE, f"{column}={value} outside [1, 10]", location=where)
            scores[field] = value
        events.append(RiskEvent(id=risk_id, description=row["description"], **scores))

        for column, task_id in rf_columns.items():
            cell = row[column].strip()
            if not cell:
                continue
            where = f"{source}:{line}:{column}"
            rf = _number(cell, column, where)
            if not 0.0 <= rf <= 1.0:
                raise ParseError(ErrorCode.RANGE, f"{column}={rf} outside [0, 1]", location=where)
            entries[(task_id, risk_id)] = rf

    logger.info(f"Read {len(events)} risks with {len(entries)} risk-factor entries")
    matrix = RiskFactorMatrix(risk_ids=tuple(e.id for e in events), entries=entries)
    return events, matrix
