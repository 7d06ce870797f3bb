from pathlib import Path
from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Dict, List, Optional, Tuple, Union

from chainrisk.models.assessment import CriteriaWeights, RiskAssessment
from chainrisk.models.mitigation import MitigationReport
from chainrisk.models.project import ValidationReport
from chainrisk.models.schedule import (
    BufferedSchedule,
    BufferMethod,
    CriticalChainPlan,
    VarianceAssumption,
)
from chainrisk.models.simulation import BufferAssessment, SimulationResult

STAGES = ("validate", "assess", "schedule", "simulate", "mitigate")
FORMATS = ("json", "csv", "text")


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # Inputs
    project_path: Optional[Path] = None
    estimates_path: Optional[Path] = None
    risk_register_path: Optional[Path] = None
    ahp_matrix_path: Optional[Path] = None
    rule_base_path: Optional[Path] = None
    fault_tree_path: Optional[Path] = None

    # Buffers
    methods: Tuple[BufferMethod, ...] = tuple(BufferMethod)
    variance: VarianceAssumption = VarianceAssumption.RSEM_HALF_U

    # Simulation
    replications: int = Field(default=10000, ge=1)
    seed: int = Field(default=42, ge=0, lt=2**64)
    deadline: Optional[float] = None
    workers: int = Field(default=1, ge=1)

    # Output
    output_dir: Path = Path("out")
    formats: Tuple[str, ...] = FORMATS
    dump_samples: bool = False
    stages: Tuple[str, ...] = STAGES

    @field_validator("formats")
    @classmethod
    def _check_formats(cls, value):
        unknown = [f for f in value if f not in FORMATS]
        if unknown:
            raise ValueError(f"unknown output formats: {unknown}")
        return value

    @field_validator("stages")
    @classmethod
    def _check_stages(cls, value):
        unknown = [s for s in value if s not in STAGES]
        if unknown:
            raise ValueError(f"unknown stages: {unknown}")
        return value


class InputDigest(BaseModel):
    model_config = ConfigDict(frozen=True)

    role: str
    name: str
    sha256: str


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    tool: str = "chainrisk"
    version: str
    seed: int
    replications: int
    methods: Tuple[str, ...]
    variance: str
    inputs: Tuple[InputDigest, ...]


class StageRecord(BaseModel):
    stage: str
    status: str = "running"
    summary: Dict[str, Union[int, float]] = Field(default_factory=dict)
    error: Optional[str] = None


class AnalysisBundle(BaseModel):
    provenance: Provenance
    stages: List[StageRecord] = Field(default_factory=list)
    validation: Optional[ValidationReport] = None
    criteria_weights: Optional[CriteriaWeights] = None
    risk_ranking: Optional[Tuple[RiskAssessment, ...]] = None
    plan: Optional[CriticalChainPlan] = None
    buffered: Dict[str, BufferedSchedule] = Field(default_factory=dict)
    simulation: Optional[SimulationResult] = None
    buffer_assessment: Optional[BufferAssessment] = None
    mitigation: Optional[MitigationReport] = None
