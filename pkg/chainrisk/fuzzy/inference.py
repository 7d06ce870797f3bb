from enum import Enum
from functools import lru_cache
from itertools import product
from pydantic import BaseModel, ConfigDict, model_validator
from typing import Tuple
import numpy as np

from chainrisk.fuzzy.sets import (
    FuzzySet,
    LinguisticScale,
    criticality_layout,
    triangular_layout,
)

INPUT_NAMES = ("P", "AI", "D")


class Conjunction(str, Enum):
    MIN = "min"
    PRODUCT = "product"


class Implication(str, Enum):
    MIN = "min"  # clip
    PRODUCT = "product"  # scale


class Aggregation(str, Enum):
    MAX = "max"
    SUM = "sum"  # bounded at 1


class Operators(BaseModel):
    model_config = ConfigDict(frozen=True)

    conjunction: Conjunction = Conjunction.MIN
    implication: Implication = Implication.MIN
    aggregation: Aggregation = Aggregation.MAX


class RuleBase(BaseModel):
    """Complete three-input Mamdani rule table over five-term scales"""

    model_config = ConfigDict(frozen=True)

    input_scales: Tuple[LinguisticScale, LinguisticScale, LinguisticScale]
    output_scale: LinguisticScale
    # (p term, ai term, d term, output term)
    rules: Tuple[Tuple[int, int, int, int], ...]
    operators: Operators = Operators()

    @model_validator(mode="after")
    def _check_rules(self) -> "RuleBase":
        if len(self.rules) != 125:
            raise ValueError(f"rule base needs 125 rules, got {len(self.rules)}")
        seen = set()
        for rule in self.rules:
            if any(not 0 <= idx < 5 for idx in rule):
                raise ValueError(f"rule {rule} references a term index outside 0..4")
            seen.add(rule[:3])
        if len(seen) != 125:
            raise ValueError("rule base must hold exactly one rule per input combination")
        for scale in self.input_scales:
            if scale.universe != self.output_scale.universe:
                raise ValueError("input and output scales must share one universe")
        return self

    def output_table(self) -> np.ndarray:
        """Output term index per (p, ai, d) term triple, shape (5, 5, 5)"""
        table = np.zeros((5, 5, 5), dtype=int)
        for i, j, k, t in self.rules:
            table[i, j, k] = t
        return table


def mean_index_rules() -> Tuple[Tuple[int, int, int, int], ...]:
    """Output term = rounded mean of the three input term indices"""
    return tuple((i, j, k, int(round((i + j + k) / 3.0))) for i, j, k in product(range(5), repeat=3))


@lru_cache(maxsize=None)
def classic_rule_base() -> RuleBase:
    """min firing, clipped consequents, max aggregation over the input layout"""
    scales = tuple(triangular_layout(name) for name in INPUT_NAMES)
    return RuleBase(
        input_scales=scales,
        output_scale=triangular_layout("RCN"),
        rules=mean_index_rules(),
        operators=Operators(),
    )


@lru_cache(maxsize=None)
def default_rule_base() -> RuleBase:
    """Rule base used for the risk criticality number.

    Same rule table as the classic base, evaluated with product firing, scaled
    consequents and summed aggregation. With the triangular input layout the
    firing strengths sum to one, so raising an input only moves weight toward
    rules with higher outputs and the centroid never drops.
    """
    scales = tuple(triangular_layout(name) for name in INPUT_NAMES)
    return RuleBase(
        input_scales=scales,
        output_scale=criticality_layout("RCN"),
        rules=mean_index_rules(),
        operators=Operators(
            conjunction=Conjunction.PRODUCT,
            implication=Implication.PRODUCT,
            aggregation=Aggregation.SUM,
        ),
    )


def firing_strengths(rb: RuleBase, p: float, ai: float, d: float) -> np.ndarray:
    """Strength of every (p, ai, d) term triple, shape (5, 5, 5)"""
    mp, ma, md = (scale.degrees(x) for scale, x in zip(rb.input_scales, (p, ai, d)))
    if rb.operators.conjunction is Conjunction.PRODUCT:
        return np.einsum("i,j,k->ijk", mp, ma, md)
    return np.minimum(np.minimum(mp[:, None, None], ma[None, :, None]), md[None, None, :])


def mamdani_infer(rb: RuleBase, p: float, ai: float, d: float) -> FuzzySet:
    strengths = firing_strengths(rb, p, ai, d).reshape(-1)
    outputs = rb.output_table().reshape(-1)
    curves = rb.output_scale.sampled()[outputs]

    weights = strengths[:, None]
    if rb.operators.implication is Implication.PRODUCT:
        consequents = weights * curves
    else:
        consequents = np.minimum(weights, curves)

    if rb.operators.aggregation is Aggregation.SUM:
        aggregated = np.minimum(np.sum(consequents, axis=0), 1.0)
    else:
        aggregated = np.max(consequents, axis=0)
    return FuzzySet.from_degrees(aggregated, rb.output_scale.universe)
