# Monte Carlo schedule risk analysis
from .monte_carlo import (
    assess_buffers,
    criticality_indices,
    deadline_probability,
    histogram,
    run_simulation,
    sample_duration,
)

__all__ = [
    "assess_buffers",
    "criticality_indices",
    "deadline_probability",
    "histogram",
    "run_simulation",
    "sample_duration",
]
