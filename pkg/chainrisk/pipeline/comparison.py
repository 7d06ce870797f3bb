from pathlib import Path
from typing import Iterable, List, Optional
import logging

from chainrisk.errors import ChainRiskError, ProjectInvalidError
from chainrisk.ingest import load_project
from chainrisk.models.schedule import MethodComparison, VarianceAssumption
from chainrisk.network import validate_project
from chainrisk.scheduling import compare_buffer_methods, with_safety

logger = logging.getLogger(__name__)


def compare_instances(
    paths: Iterable[Path],
    methods: Iterable,
    variance: Optional[VarianceAssumption],
    safety_factor: float,
) -> List[MethodComparison]:
    """
    Buffer-method comparison over a set of instance files

    Each file is loaded (JSON or Patterson), validated, given safety where
    it carries a single duration, then buffered once per method. The first
    unreadable or invalid instance aborts the comparison.
    """
    methods = tuple(methods)
    results = []
    for path in paths:
        path = Path(path)
        try:
            project = load_project(path)
            report = validate_project(project)
            if not report.ok:
                first = report.errors[0]
                raise ProjectInvalidError(
                    first.code,
                    f"{path.name} has {len(report.errors)} structural errors; first: {first.message}",
                    location=first.location,
                )
            results.append(
                compare_buffer_methods(with_safety(project, safety_factor), methods, variance, name=path.name)
            )
        except ChainRiskError as e:
            logger.error(f"Comparison failed on {path.name}: {e}")
            raise e.with_stage("compare")

    ratios = [r.cpm_apd_ratio for r in results if r.cpm_apd_ratio is not None]
    if ratios:
        logger.info(
            f"Compared {len(results)} instances: mean C&PM/APD {sum(ratios) / len(ratios):.4f}, "
            f"C&PM >= APD on {sum(1 for r in ratios if r >= 1.0)}"
        )
    return results
