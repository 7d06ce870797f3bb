from abc import ABC, abstractmethod
from math import fsum, sqrt
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, Sequence, Tuple

from chainrisk.config import settings
from chainrisk.models.project import Task
from chainrisk.models.schedule import BufferMethod, VarianceAssumption


class ChainEstimates(BaseModel):
    """(safe S_k, average A_k) per task along a chain"""

    model_config = ConfigDict(frozen=True)

    estimates: Tuple[Tuple[float, float], ...] = ()

    @model_validator(mode="after")
    def _check_safety(self) -> "ChainEstimates":
        for safe, avg in self.estimates:
            if safe < avg:
                raise ValueError(f"safe estimate {safe} is below average estimate {avg}")
        return self

    @classmethod
    def from_tasks(cls, tasks: Sequence[Task]) -> "ChainEstimates":
        return cls(estimates=tuple((t.est_safe, t.est_avg) for t in tasks))

    @classmethod
    def from_safety(cls, u: Sequence[float]) -> "ChainEstimates":
        return cls(estimates=tuple((float(x), 0.0) for x in u))

    @property
    def u(self) -> Tuple[float, ...]:
        """Uncertainty U_k = S_k - A_k"""
        return tuple(safe - avg for safe, avg in self.estimates)


class FeedingSubnetwork(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_n: int = Field(ge=1)
    t_pr: int = Field(ge=0)
    longest_path: Tuple[int, ...]
    variances: Dict[int, float]

    @model_validator(mode="after")
    def _check_path(self) -> "FeedingSubnetwork":
        if not self.longest_path:
            raise ValueError("longest path must hold at least one task")
        missing = [t for t in self.longest_path if t not in self.variances]
        if missing:
            raise ValueError(f"no variance for longest-path tasks {missing}")
        if any(v < 0 for v in self.variances.values()):
            raise ValueError("activity variances must be >= 0")
        return self

    @property
    def density_factor(self) -> float:
        """FC = 1 + T_pr / T_n"""
        return 1.0 + self.t_pr / self.t_n


def cut_paste_buffer(chain: ChainEstimates) -> float:
    """Half the summed safety removed from the chain"""
    return 0.5 * fsum(chain.u)


def rsem_buffer(chain: ChainEstimates) -> float:
    """2 * beta = sqrt(U_1^2 + ... + U_k^2)"""
    return sqrt(fsum(u * u for u in chain.u))


def apd_buffer(sub: FeedingSubnetwork) -> float:
    """FC * sqrt(SUM), SUM accumulated over the longest path"""
    total = fsum(sub.variances[t] for t in sub.longest_path)
    return sub.density_factor * sqrt(total)


def activity_variance(task: Task, assumption: VarianceAssumption = None) -> float:
    """
    Variance VA_i of a task duration

    rsem_half_u: ((S - A) / 2)^2, the RSEM per-task standard deviation squared.
    triangular: variance of a triangular distribution on [min, max] with mode A.
    """
    assumption = VarianceAssumption(assumption or settings.buffer.variance)
    if assumption is VarianceAssumption.TRIANGULAR:
        lo, mode, hi = task.est_min, task.est_avg, task.est_max
        return max(0.0, ((hi - lo) ** 2 - (hi - mode) * (mode - lo)) / 18.0)
    half = (task.est_safe - task.est_avg) / 2.0
    return half * half


class BufferSizingStrategy(ABC):
    method: BufferMethod

    @abstractmethod
    def size(self, chain: ChainEstimates, sub: FeedingSubnetwork) -> float:
        """Buffer size for a chain and its surrounding sub-network"""

    def get_name(self) -> str:
        return self.__class__.__name__


class CutAndPasteMethod(BufferSizingStrategy):
    method = BufferMethod.CPM_CUT_PASTE

    def size(self, chain, sub):
        return cut_paste_buffer(chain)

    def get_name(self):
        return "Cut-and-Paste Method (C&PM)"


class RootSquareErrorMethod(BufferSizingStrategy):
    method = BufferMethod.RSEM

    def size(self, chain, sub):
        return rsem_buffer(chain)

    def get_name(self):
        return "Root Square Error Method (RSEM)"


class AdaptiveDensityMethod(BufferSizingStrategy):
    method = BufferMethod.APD

    def size(self, chain, sub):
        return apd_buffer(sub)

    def get_name(self):
        return "Adaptive Procedure with Density (APD)"


STRATEGIES = {
    BufferMethod.CPM_CUT_PASTE: CutAndPasteMethod(),
    BufferMethod.RSEM: RootSquareErrorMethod(),
    BufferMethod.APD: AdaptiveDensityMethod(),
}


def strategy_for(method) -> BufferSizingStrategy:
    return STRATEGIES[BufferMethod.parse(method)]
