from .project import (
    Project,
    RiskEvent,
    RiskFactorMatrix,
    Task,
    ValidationFinding,
    ValidationReport,
)
from .assessment import AhpComparisonMatrix, CriteriaWeights, RiskAssessment, RiskLevel
from .schedule import (
    BaselineSchedule,
    BufferedSchedule,
    BufferMethod,
    CriticalChainPlan,
    FeedingChain,
    MethodComparison,
    TimeWindow,
    VarianceAssumption,
)
from .simulation import SimConfig, SimulationResult
from .mitigation import (
    BasicEvent,
    EventTree,
    EventTreePath,
    FaultTree,
    Gate,
    GateKind,
    MitigationReport,
    RootCause,
    Strategy,
)
from .bundle import AnalysisBundle, RunConfig

__all__ = [
    "Project",
    "RiskEvent",
    "RiskFactorMatrix",
    "Task",
    "ValidationFinding",
    "ValidationReport",
    "AhpComparisonMatrix",
    "CriteriaWeights",
    "RiskAssessment",
    "RiskLevel",
    "BaselineSchedule",
    "BufferedSchedule",
    "BufferMethod",
    "CriticalChainPlan",
    "FeedingChain",
    "MethodComparison",
    "TimeWindow",
    "VarianceAssumption",
    "SimConfig",
    "SimulationResult",
    "BasicEvent",
    "EventTree",
    "EventTreePath",
    "FaultTree",
    "Gate",
    "GateKind",
    "MitigationReport",
    "RootCause",
    "Strategy",
    "AnalysisBundle",
    "RunConfig",
]
