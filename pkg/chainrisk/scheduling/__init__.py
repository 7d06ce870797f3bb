# Leveling, critical chain identification and buffer placement
from .baseline import CapacityViolation, audit_capacity, build_baseline
from .buffering import feeding_subnetwork, insert_buffers, project_subnetwork
from .chain import identify_critical_chain
from .comparison import compare_buffer_methods, with_safety

__all__ = [
    "CapacityViolation",
    "audit_capacity",
    "build_baseline",
    "compare_buffer_methods",
    "feeding_subnetwork",
    "identify_critical_chain",
    "insert_buffers",
    "project_subnetwork",
    "with_safety",
]
