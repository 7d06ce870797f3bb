from enum import Enum
from pydantic import BaseModel, ConfigDict, Field
from typing import Dict, Optional, Tuple

from chainrisk.errors import AnalysisError, ErrorCode


class TimeWindow(BaseModel):
    """One row of a forward/backward pass"""

    model_config = ConfigDict(frozen=True)

    early_start: float
    early_finish: float
    late_start: float
    late_finish: float
    slack: float


class BaselineSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: Dict[int, float]
    finish: Dict[int, float]
    durations_used: Dict[int, float]
    precedence: Tuple[Tuple[int, int], ...]
    # (releasing task, waiting task)
    resource_links: Tuple[Tuple[int, int], ...] = ()

    @property
    def makespan(self) -> float:
        return max(self.finish.values(), default=0.0)

    def all_arcs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(self.precedence) + tuple(self.resource_links)


class FeedingChain(BaseModel):
    model_config = ConfigDict(frozen=True)

    tasks: Tuple[int, ...]
    merge_task: int
    # Task the chain's last task feeds directly (critical-chain or feeding-chain task)
    joins: int


class CriticalChainPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    critical_chain: Tuple[int, ...]
    feeding_chains: Tuple[FeedingChain, ...] = ()
    makespan: float
    schedule: BaselineSchedule


class BufferMethod(str, Enum):
    CPM_CUT_PASTE = "cpm"
    RSEM = "rsem"
    APD = "apd"

    @classmethod
    def parse(cls, value) -> "BufferMethod":
        if isinstance(value, cls):
            return value
        for method in cls:
            if str(value).lower() in (method.value, method.name.lower()):
                return method
        raise AnalysisError(ErrorCode.UNKNOWN_METHOD, f"unknown buffer method '{value}'")


class VarianceAssumption(str, Enum):
    RSEM_HALF_U = "rsem_half_u"
    TRIANGULAR = "triangular"


class BufferedSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    plan: CriticalChainPlan = Field(exclude=True)
    method: BufferMethod
    feeding_buffers: Dict[int, float] = Field(default_factory=dict)
    # Latest allowable start of each feeding chain once its buffer is in place
    feeding_latest_starts: Dict[int, float] = Field(default_factory=dict)
    project_buffer: float
    buffered_completion: float


class MethodComparison(BaseModel):
    """Buffered completion of one instance under each sizing method"""

    model_config = ConfigDict(frozen=True)

    instance: str
    tasks: int
    feeding_chains: int
    makespan: float
    completions: Dict[BufferMethod, float]

    @property
    def cpm_apd_ratio(self) -> Optional[float]:
        cpm = self.completions.get(BufferMethod.CPM_CUT_PASTE)
        apd = self.completions.get(BufferMethod.APD)
        if cpm is None or not apd:
            return None
        return cpm / apd
