# Fuzzy FMEA risk assessment
from .risk_assessment import (
    RiskAssessor,
    aggregated_impact,
    ahp_weights,
    determine_risk_level,
    rank_register,
    risk_criticality,
    weights_from_crisp,
)

__all__ = [
    "RiskAssessor",
    "aggregated_impact",
    "ahp_weights",
    "determine_risk_level",
    "rank_register",
    "risk_criticality",
    "weights_from_crisp",
]
