# Fault tree / event tree mitigation analysis
from .trees import (
    analyze_mitigation,
    evaluate_event_tree,
    evaluate_fault_tree,
    format_mitigation_table,
    rank_root_causes,
)

__all__ = [
    "analyze_mitigation",
    "evaluate_event_tree",
    "evaluate_fault_tree",
    "format_mitigation_table",
    "rank_root_causes",
]
