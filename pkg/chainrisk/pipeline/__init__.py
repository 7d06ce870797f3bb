# Stage runners and report writers
from .comparison import compare_instances
from .reporting import render_comparison, render_report
from .runner import run_pipeline

__all__ = ["compare_instances", "render_comparison", "render_report", "run_pipeline"]
