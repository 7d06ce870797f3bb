# Readers and writers for external formats
from .patterson import parse_patterson, serialize_patterson
from .project_json import apply_estimates, dump_project_json, load_project, parse_project_json, read_text
from .risk_register import parse_risk_register
from .documents import (
    dump_ahp_matrix,
    dump_rule_base,
    load_document,
    parse_ahp_matrix,
    parse_rule_base,
    parse_trees,
)

__all__ = [
    "parse_patterson",
    "serialize_patterson",
    "apply_estimates",
    "dump_project_json",
    "load_project",
    "parse_project_json",
    "read_text",
    "parse_risk_register",
    "dump_ahp_matrix",
    "dump_rule_base",
    "load_document",
    "parse_ahp_matrix",
    "parse_rule_base",
    "parse_trees",
]
