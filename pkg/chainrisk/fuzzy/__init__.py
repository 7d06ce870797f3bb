from .sets import (
    FuzzySet,
    LinguisticScale,
    LinguisticTerm,
    TrapezoidalFuzzyNumber,
    centroid,
    criticality_layout,
    graded_mean,
    membership,
    triangular_layout,
)
from .inference import (
    Operators,
    RuleBase,
    classic_rule_base,
    default_rule_base,
    mamdani_infer,
)

__all__ = [
    "FuzzySet",
    "LinguisticScale",
    "LinguisticTerm",
    "TrapezoidalFuzzyNumber",
    "centroid",
    "criticality_layout",
    "graded_mean",
    "membership",
    "triangular_layout",
    "Operators",
    "RuleBase",
    "classic_rule_base",
    "default_rule_base",
    "mamdani_infer",
]
