from .cpm import cpm_pass, makespan_of, topological_order
from .validation import validate_project

__all__ = ["cpm_pass", "makespan_of", "topological_order", "validate_project"]
