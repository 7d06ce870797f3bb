from typing import List, Optional, Sequence
import logging
import numpy as np

from chainrisk.config import settings
from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.fuzzy.inference import RuleBase, default_rule_base, mamdani_infer
from chainrisk.fuzzy.sets import centroid, graded_mean
from chainrisk.models.assessment import (
    AhpComparisonMatrix,
    CriteriaWeights,
    RiskAssessment,
    RiskLevel,
)
from chainrisk.models.project import RiskEvent

logger = logging.getLogger(__name__)


def weights_from_crisp(matrix: np.ndarray) -> CriteriaWeights:
    """Total priority TP_i = row mean of X_ij, normalized to sum 1"""
    matrix = np.asarray(matrix, dtype=float)
    totals = matrix.sum(axis=1) / matrix.shape[1]
    grand = float(totals.sum())
    if grand <= 0.0:
        raise AnalysisError(ErrorCode.DEGENERATE, "all total priorities are zero")
    tpc, tpt, tpq = (float(t) / grand for t in totals)
    return CriteriaWeights(tpc=tpc, tpt=tpt, tpq=tpq)


def ahp_weights(matrix: AhpComparisonMatrix) -> CriteriaWeights:
    crisp = np.array([[graded_mean(cell) for cell in row] for row in matrix.entries])
    return weights_from_crisp(crisp)


def aggregated_impact(w: CriteriaWeights, r: RiskEvent) -> float:
    """AI = TPC * IC + TPT * TI + TPQ * IQ"""
    impacts = (r.impact_cost, r.impact_time, r.impact_quality)
    value = float(np.dot(w.as_tuple(), impacts))
    # convex combination; clamp float drift back into the impact range
    return min(max(value, min(impacts)), max(impacts))


def risk_criticality(p: float, ai: float, d: float, rb: Optional[RuleBase] = None) -> float:
    """Risk criticality number: centroid of the Mamdani output for (P, AI, D)"""
    rb = rb or default_rule_base()
    return centroid(mamdani_infer(rb, p, ai, d))


def determine_risk_level(rcn: float) -> RiskLevel:
    """Qualitative band of an RCN"""
    if rcn >= settings.risk_threshold_critical:
        return RiskLevel.CRITICAL
    elif rcn >= settings.risk_threshold_high:
        return RiskLevel.HIGH
    elif rcn >= settings.risk_threshold_medium:
        return RiskLevel.MEDIUM
    else:
        return RiskLevel.LOW


def rank_register(
    register: Sequence[RiskEvent],
    matrix: AhpComparisonMatrix,
    rb: Optional[RuleBase] = None,
) -> List[RiskAssessment]:
    """
    Assess every risk and rank by RCN

    Ranks follow RCN descending; ties go to the lexicographically smaller
    risk id.

    Args:
        register: Risk events (nonempty)
        matrix: Fuzzy AHP comparison matrix over cost, time, quality
        rb: Rule base; the default monotone base when omitted

    Returns:
        One RiskAssessment per risk, in rank order
    """
    if not register:
        raise AnalysisError(ErrorCode.DEGENERATE, "risk register is empty")

    rb = rb or default_rule_base()
    weights = ahp_weights(matrix)

    scored = []
    for risk in register:
        ai = aggregated_impact(weights, risk)
        rcn = risk_criticality(risk.p, ai, risk.d, rb)
        scored.append((risk.id, ai, rcn))

    scored.sort(key=lambda item: (-item[2], item[0]))
    assessments = [
        RiskAssessment(risk_id=rid, ai=ai, rcn=rcn, rank=rank, level=determine_risk_level(rcn))
        for rank, (rid, ai, rcn) in enumerate(scored, start=1)
    ]

    critical = [a.risk_id for a in assessments if a.level is RiskLevel.CRITICAL]
    if critical:
        logger.info(f"Critical risks: {critical}")
    return assessments


class RiskAssessor:
    """
    Fuzzy FMEA assessor combining:
    - fuzzy AHP criteria weights
    - aggregated impact
    - Mamdani risk criticality number
    """

    def __init__(self, matrix: Optional[AhpComparisonMatrix] = None, rb: Optional[RuleBase] = None):
        self.matrix = matrix or AhpComparisonMatrix.equal_importance()
        self.rule_base = rb or default_rule_base()
        self.weights = ahp_weights(self.matrix)

    def assess(self, register: Sequence[RiskEvent]) -> List[RiskAssessment]:
        logger.info(
            f"Assessing {len(register)} risks with weights "
            f"(cost={self.weights.tpc:.3f}, time={self.weights.tpt:.3f}, quality={self.weights.tpq:.3f})"
        )
        return rank_register(register, self.matrix, self.rule_base)
