from enum import Enum
from typing import Optional


class ErrorCode(str, Enum):
    # Structural findings
    CYCLE = "CYCLE"
    DANGLING_ARC = "DANGLING_ARC"
    SELF_ARC = "SELF_ARC"
    DUPLICATE_ARC = "DUPLICATE_ARC"
    DUPLICATE_TASK = "DUPLICATE_TASK"
    INVALID_ID = "INVALID_ID"
    ESTIMATE_ORDER = "ESTIMATE_ORDER"
    NEGATIVE_DEMAND = "NEGATIVE_DEMAND"
    UNKNOWN_RESOURCE = "UNKNOWN_RESOURCE"
    DEMAND_EXCEEDS_CAPACITY = "DEMAND_EXCEEDS_CAPACITY"
    MULTIPLE_SOURCES = "MULTIPLE_SOURCES"
    MULTIPLE_SINKS = "MULTIPLE_SINKS"

    # Ingestion
    MALFORMED = "MALFORMED"
    RANGE = "RANGE"
    UNKNOWN_TASK = "UNKNOWN_TASK"
    UNKNOWN_RISK = "UNKNOWN_RISK"
    IO = "IO"
    INVALID_CONFIG = "INVALID_CONFIG"

    # Analysis
    MISSING_DURATION = "MISSING_DURATION"
    INFEASIBLE = "INFEASIBLE"
    UNKNOWN_METHOD = "UNKNOWN_METHOD"
    UNKNOWN_TERM = "UNKNOWN_TERM"
    OUT_OF_UNIVERSE = "OUT_OF_UNIVERSE"
    EMPTY_SET = "EMPTY_SET"
    DEGENERATE = "DEGENERATE"
    EMPTY_GATE = "EMPTY_GATE"
    TOO_MANY_STRATEGIES = "TOO_MANY_STRATEGIES"
    INTERNAL = "INTERNAL"


class ChainRiskError(Exception):
    """Base error carrying a stable code and an optional location"""

    exit_code = 4

    def __init__(self, code: ErrorCode, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.location = location
        self.stage: Optional[str] = None

    def with_stage(self, stage: str) -> "ChainRiskError":
        if self.stage is None:
            self.stage = stage
            self.message = f"{stage}: {self.message}"
        return self

    def to_dict(self) -> dict:
        return {
            "code": self.code.value,
            "stage": self.stage,
            "message": self.message,
            "location": self.location,
        }

    def __str__(self) -> str:
        where = f" ({self.location})" if self.location else ""
        return f"[{self.code.value}] {self.message}{where}"


class ParseError(ChainRiskError):
    """Input could not be read or does not follow its format"""

    exit_code = 3


class ProjectInvalidError(ChainRiskError):
    """Project parsed but violates structural invariants"""

    exit_code = 2


class AnalysisError(ChainRiskError):
    """Failure inside one of the analysis engines"""

    exit_code = 4
