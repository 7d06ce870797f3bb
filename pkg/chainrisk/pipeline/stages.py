from contextlib import contextmanager
import logging

from chainrisk.errors import ChainRiskError
from chainrisk.models.bundle import AnalysisBundle, StageRecord

logger = logging.getLogger(__name__)


@contextmanager
def stage(bundle: AnalysisBundle, name: str):
    """
    Run one pipeline stage and keep its record in the bundle

    Errors are logged, marked on the record and re-raised with the stage
    name in front of their message.
    """
    record = StageRecord(stage=name)
    bundle.stages.append(record)
    logger.info(f"Starting stage '{name}'...")
    try:
        yield record
    except ChainRiskError as e:
        record.status = "failed"
        record.error = e.code.value
        logger.error(f"Stage '{name}' failed: {e}")
        raise e.with_stage(name)
    except Exception as e:
        record.status = "failed"
        record.error = type(e).__name__
        logger.error(f"Stage '{name}' failed: {e}")
        raise

    record.status = "completed"
    summary = ", ".join(f"{k}={v:g}" for k, v in record.summary.items())
    logger.info(f"Stage '{name}' completed" + (f": {summary}" if summary else ""))


def skip(bundle: AnalysisBundle, name: str, reason: str):
    bundle.stages.append(StageRecord(stage=name, status="skipped"))
    logger.info(f"Skipping stage '{name}': {reason}")
