from pydantic import BaseModel, ConfigDict, Field
from typing import Dict, Optional, Tuple


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    replications: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    deadline: Optional[float] = None
    workers: int = Field(default=1, ge=1)


class Percentiles(BaseModel):
    model_config = ConfigDict(frozen=True)

    p10: float
    p50: float
    p80: float
    p90: float
    p95: float


class SimulationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    replications: int
    seed: int
    # Full sample in replication order; dumped separately on request
    makespans: Tuple[float, ...] = Field(exclude=True)
    mean: float
    std: float
    minimum: float
    maximum: float
    percentiles: Percentiles
    zero_slack_counts: Dict[int, int]
    criticality_index: Dict[int, float]
    deadline: Optional[float] = None
    deadline_probability: Optional[float] = None


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    bin_lower: float
    bin_upper: float
    count: int


class BufferAdequacy(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: str
    buffered_completion: float
    probability: float


class BufferAssessment(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_probability: float
    methods: Tuple[BufferAdequacy, ...]
    recommended: Optional[str] = None
