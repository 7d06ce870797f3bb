from enum import Enum
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Tuple

from chainrisk.fuzzy.sets import TrapezoidalFuzzyNumber

CRITERIA = ("cost", "time", "quality")

Row = Tuple[TrapezoidalFuzzyNumber, TrapezoidalFuzzyNumber, TrapezoidalFuzzyNumber]


class AhpComparisonMatrix(BaseModel):
    """Pairwise importance X_kl of criterion k over l (cost, time, quality)"""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Row, Row, Row]

    @model_validator(mode="after")
    def _check_diagonal(self) -> "AhpComparisonMatrix":
        for i in range(3):
            if self.entries[i][i].corners() != (1.0, 1.0, 1.0, 1.0):
                raise ValueError(f"diagonal entry for '{CRITERIA[i]}' must be crisp 1")
        return self

    @classmethod
    def equal_importance(cls) -> "AhpComparisonMatrix":
        one = TrapezoidalFuzzyNumber.crisp(1.0)
        return cls(entries=((one, one, one), (one, one, one), (one, one, one)))


class CriteriaWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    # Total priority of cost, time, quality
    tpc: float = Field(ge=0)
    tpt: float = Field(ge=0)
    tpq: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_normalized(self) -> "CriteriaWeights":
        if abs(self.tpc + self.tpt + self.tpq - 1.0) > 1e-9:
            raise ValueError("criteria weights must sum to 1")
        return self

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.tpc, self.tpt, self.tpq)


class RiskLevel(str, Enum):
    CRITICAL = "CRITICAL"
    HIGH = "HIGH"
    MEDIUM = "MEDIUM"
    LOW = "LOW"


class RiskAssessment(BaseModel):
    model_config = ConfigDict(frozen=True)

    risk_id: str
    ai: float
    rcn: float
    rank: int = Field(ge=1)
    level: RiskLevel
