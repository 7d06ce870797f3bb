from pathlib import Path
from pydantic import ValidationError
from typing import Any, Optional, Tuple, Union
import json
import logging

from chainrisk.errors import ErrorCode, ParseError
from chainrisk.fuzzy.inference import RuleBase
from chainrisk.fuzzy.sets import TrapezoidalFuzzyNumber, graded_mean
from chainrisk.ingest.project_json import read_text
from chainrisk.models.assessment import AhpComparisonMatrix
from chainrisk.models.mitigation import EventTree, FaultTree

logger = logging.getLogger(__name__)


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(ErrorCode.MALFORMED, f"invalid JSON: {e.msg}", location=f"{source}:{e.lineno}") from e


def _invalid(e: ValidationError, source: str) -> ParseError:
    first = e.errors()[0]
    where = ".".join(str(p) for p in first["loc"])
    return ParseError(ErrorCode.MALFORMED, f"{where}: {first['msg']}", location=source)


# AHP matrix: {"matrix": [[[l, m, n, o], ...3], ...3]}


def parse_ahp_matrix(text: str, source: str = "ahp") -> AhpComparisonMatrix:
    document = _load_json(text, source)
    rows = document.get("matrix") if isinstance(document, dict) else document
    if not isinstance(rows, list) or len(rows) != 3 or any(not isinstance(r, list) or len(r) != 3 for r in rows):
        raise ParseError(ErrorCode.MALFORMED, "AHP matrix must be 3x3 trapezoid quadruples", location=source)
    try:
        entries = tuple(tuple(TrapezoidalFuzzyNumber.from_corners(cell) for cell in row) for row in rows)
        return AhpComparisonMatrix(entries=entries)
    except ValidationError as e:
        raise _invalid(e, source) from e
    except (TypeError, ValueError) as e:
        raise ParseError(ErrorCode.MALFORMED, f"bad trapezoid: {e}", location=source) from e


def dump_ahp_matrix(matrix: AhpComparisonMatrix) -> str:
    return json.dumps({"matrix": [[list(cell.corners()) for cell in row] for row in matrix.entries]}, indent=2)


# Rule base: the RuleBase model dumped as JSON


def parse_rule_base(text: str, source: str = "rules") -> RuleBase:
    document = _load_json(text, source)
    try:
        return RuleBase.model_validate(document)
    except ValidationError as e:
        raise _invalid(e, source) from e


def dump_rule_base(rb: RuleBase) -> str:
    return rb.model_dump_json(indent=2)


# Fault/event trees: {"fault_tree": {...}, "event_tree": {...}}


def _probability(value: Any, where: str) -> float:
    """Crisp probability, or a trapezoid quadruple defuzzified by graded mean"""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, list) and len(value) == 4:
        try:
            tfn = TrapezoidalFuzzyNumber.from_corners(value)
        except (ValidationError, TypeError, ValueError) as e:
            raise ParseError(ErrorCode.MALFORMED, f"bad fuzzy probability {value}", location=where) from e
        if tfn.l < 0 or tfn.o > 1:
            raise ParseError(ErrorCode.RANGE, f"fuzzy probability {value} leaves [0, 1]", location=where)
        return graded_mean(tfn)
    raise ParseError(ErrorCode.MALFORMED, f"probability must be a number or 4 corners, got {value!r}", location=where)


def _normalize_node(node: Any, where: str) -> dict:
    if not isinstance(node, dict):
        raise ParseError(ErrorCode.MALFORMED, "tree node must be an object", location=where)
    if "event" in node:
        p = node.get("p", node.get("probability"))
        if p is None:
            raise ParseError(ErrorCode.MALFORMED, f"event '{node['event']}' has no probability", location=where)
        return {"event": node["event"], "probability": _probability(p, f"{where}/{node['event']}")}
    if "gate" in node:
        name = node.get("name", "")
        children = node.get("children", [])
        if not isinstance(children, list):
            raise ParseError(ErrorCode.MALFORMED, f"gate '{name}' children must be a list", location=where)
        return {
            "gate": str(node["gate"]).upper(),
            "name": name,
            "children": [_normalize_node(c, f"{where}/{name or node['gate']}") for c in children],
        }
    raise ParseError(ErrorCode.MALFORMED, "tree node needs 'event' or 'gate'", location=where)


def parse_trees(text: str, source: str = "fault_tree") -> Tuple[FaultTree, Optional[EventTree]]:
    document = _load_json(text, source)
    if not isinstance(document, dict):
        raise ParseError(ErrorCode.MALFORMED, "tree document must be an object", location=source)
    ft_doc = document.get("fault_tree", document)
    if "root" not in ft_doc:
        raise ParseError(ErrorCode.MALFORMED, "fault tree needs a 'root' node", location=source)

    try:
        fault_tree = FaultTree.model_validate(
            {"name": ft_doc.get("name", "top event"), "root": _normalize_node(ft_doc["root"], source)}
        )
    except ValidationError as e:
        raise _invalid(e, source) from e

    names = [e.event for e in fault_tree.basic_events()]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ParseError(ErrorCode.MALFORMED, f"basic events appear more than once: {duplicates}", location=source)

    event_tree = None
    et_doc = document.get("event_tree")
    if et_doc is not None:
        strategies = []
        for i, s in enumerate(et_doc.get("strategies", [])):
            where = f"{source}/strategies[{i}]"
            f = s.get("failure_probability", s.get("f"))
            if f is None:
                raise ParseError(ErrorCode.MALFORMED, "strategy has no failure probability", location=where)
            strategies.append({"name": s.get("name", f"S{i + 1}"), "failure_probability": _probability(f, where)})
        initiating = et_doc.get("initiating_probability")
        try:
            event_tree = EventTree.model_validate(
                {
                    "initiating_probability": None if initiating is None else _probability(initiating, source),
                    "strategies": strategies,
                }
            )
        except ValidationError as e:
            raise _invalid(e, source) from e

    logger.info(
        f"Read fault tree '{fault_tree.name}' with {len(names)} basic events"
        + (f" and {len(event_tree.strategies)} mitigation strategies" if event_tree else "")
    )
    return fault_tree, event_tree


def load_document(path: Union[str, Path], parser):
    path = Path(path)
    return parser(read_text(path), source=path.name)
