from dataclasses import dataclass
from pydantic import BaseModel, ConfigDict, model_validator
from typing import Tuple
import logging
import numpy as np

from chainrisk.errors import AnalysisError, ErrorCode

logger = logging.getLogger(__name__)

UNIVERSE: Tuple[float, float] = (1.0, 10.0)
STEP = 0.01
TERM_LABELS = ("Very Low", "Low", "Medium", "High", "Very High")
# Tolerance for inputs sitting on the universe edges after float arithmetic
EDGE_TOLERANCE = 1e-9


def universe_samples(universe: Tuple[float, float] = UNIVERSE) -> np.ndarray:
    lo, hi = universe
    count = int(round((hi - lo) / STEP)) + 1
    return np.linspace(lo, hi, count)


class TrapezoidalFuzzyNumber(BaseModel):
    """Trapezoid (l, m, n, o): support [l, o], core [m, n]"""

    model_config = ConfigDict(frozen=True)

    l: float
    m: float
    n: float
    o: float

    @model_validator(mode="after")
    def _check_order(self) -> "TrapezoidalFuzzyNumber":
        if not (self.l <= self.m <= self.n <= self.o):
            raise ValueError(
                f"trapezoid corners must satisfy l <= m <= n <= o, got "
                f"({self.l}, {self.m}, {self.n}, {self.o})"
            )
        return self

    @classmethod
    def crisp(cls, value: float) -> "TrapezoidalFuzzyNumber":
        return cls(l=value, m=value, n=value, o=value)

    @classmethod
    def from_corners(cls, corners) -> "TrapezoidalFuzzyNumber":
        l, m, n, o = (float(c) for c in corners)
        return cls(l=l, m=m, n=n, o=o)

    def corners(self) -> Tuple[float, float, float, float]:
        return (self.l, self.m, self.n, self.o)


def graded_mean(tfn: TrapezoidalFuzzyNumber) -> float:
    """Graded mean integration: (l + 2(m + n) + o) / 6"""
    value = (tfn.l + 2.0 * (tfn.m + tfn.n) + tfn.o) / 6.0
    # rounding can leave a crisp number one ulp outside its support
    return min(max(value, tfn.l), tfn.o)


class LinguisticTerm(BaseModel):
    """Piecewise-linear membership curve given by (x, degree) breakpoints"""

    model_config = ConfigDict(frozen=True)

    label: str
    points: Tuple[Tuple[float, float], ...]

    @model_validator(mode="after")
    def _check_points(self) -> "LinguisticTerm":
        if len(self.points) < 2:
            raise ValueError(f"term '{self.label}' needs at least two breakpoints")
        xs = [x for x, _ in self.points]
        if any(b < a for a, b in zip(xs, xs[1:])):
            raise ValueError(f"term '{self.label}' breakpoints must be sorted by x")
        if any(not 0.0 <= mu <= 1.0 for _, mu in self.points):
            raise ValueError(f"term '{self.label}' degrees must lie in [0, 1]")
        return self

    def evaluate(self, x):
        xs = np.array([p[0] for p in self.points])
        mus = np.array([p[1] for p in self.points])
        return np.interp(x, xs, mus)


class LinguisticScale(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = ""
    universe: Tuple[float, float] = UNIVERSE
    terms: Tuple[LinguisticTerm, ...]

    @model_validator(mode="after")
    def _check_terms(self) -> "LinguisticScale":
        if len(self.terms) != 5:
            raise ValueError(f"scale '{self.name}' needs exactly 5 terms, got {len(self.terms)}")
        labels = [t.label for t in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"scale '{self.name}' has duplicate term labels")
        grid = universe_samples(self.universe)
        coverage = np.max(np.vstack([t.evaluate(grid) for t in self.terms]), axis=0)
        if np.any(coverage <= 0.0):
            gap = float(grid[int(np.argmin(coverage))])
            raise ValueError(f"scale '{self.name}' leaves x={gap:.2f} uncovered")
        return self

    def index_of(self, label: str) -> int:
        for i, term in enumerate(self.terms):
            if term.label == label:
                return i
        raise AnalysisError(
            ErrorCode.UNKNOWN_TERM,
            f"scale '{self.name}' has no term '{label}'",
            location=self.name or None,
        )

    def check_in_universe(self, x: float) -> float:
        lo, hi = self.universe
        if not (lo - EDGE_TOLERANCE <= x <= hi + EDGE_TOLERANCE):
            raise AnalysisError(
                ErrorCode.OUT_OF_UNIVERSE,
                f"value {x} outside universe [{lo}, {hi}] of scale '{self.name}'",
                location=self.name or None,
            )
        return min(max(x, lo), hi)

    def degrees(self, x: float) -> np.ndarray:
        """Membership of x in every term, in term order"""
        x = self.check_in_universe(x)
        return np.array([float(t.evaluate(x)) for t in self.terms])

    def sampled(self) -> np.ndarray:
        """Term curves sampled on the universe grid, shape (terms, samples)"""
        grid = universe_samples(self.universe)
        return np.vstack([t.evaluate(grid) for t in self.terms])


def membership(scale: LinguisticScale, term: str, x: float) -> float:
    index = scale.index_of(term)
    x = scale.check_in_universe(x)
    return float(scale.terms[index].evaluate(x))


@dataclass(frozen=True)
class FuzzySet:
    """Membership curve sampled over the universe at STEP"""

    xs: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        if self.xs.shape != self.mu.shape:
            raise ValueError("samples and degrees must have the same shape")

    @classmethod
    def from_degrees(cls, mu: np.ndarray, universe: Tuple[float, float] = UNIVERSE):
        return cls(xs=universe_samples(universe), mu=np.clip(mu, 0.0, 1.0))

    @property
    def height(self) -> float:
        return float(np.max(self.mu)) if self.mu.size else 0.0


def centroid(fs: FuzzySet) -> float:
    """Discrete centre of gravity: sum(x * mu) / sum(mu)"""
    total = float(np.sum(fs.mu))
    if total <= 0.0:
        raise AnalysisError(ErrorCode.EMPTY_SET, "cannot defuzzify an all-zero fuzzy set")
    value = float(np.dot(fs.xs, fs.mu)) / total
    return min(max(value, float(fs.xs[0])), float(fs.xs[-1]))


def triangular_layout(name: str = "", universe: Tuple[float, float] = UNIVERSE) -> LinguisticScale:
    """Five evenly spaced triangles reaching zero at neighbouring centres,
    with shoulders at the universe ends"""
    lo, hi = universe
    centers = np.linspace(lo, hi, 5)
    terms = []
    for i, label in enumerate(TERM_LABELS):
        points = []
        if i > 0:
            points.append((lo, 0.0))
            if centers[i - 1] > lo:
                points.append((float(centers[i - 1]), 0.0))
        points.append((float(centers[i]), 1.0))
        if i < 4:
            points.append((float(centers[i + 1]), 0.0))
            if centers[i + 1] < hi:
                points.append((hi, 0.0))
        terms.append(LinguisticTerm(label=label, points=tuple(points)))
    return LinguisticScale(name=name, universe=universe, terms=tuple(terms))


def criticality_layout(name: str = "RCN") -> LinguisticScale:
    """Output layout for the risk criticality number.

    Three interior triangles of equal width centred on 4, 5.5 and 7, and two
    outer triangles centred on 2.5 and 8.5 whose outer legs are lifted to 0.05
    at the universe edges so the scale covers [1, 10]. The outer terms carry
    slightly more sampled area than the interior ones, which keeps the
    weighted centroid non-decreasing when rule weight moves to a higher term.
    """
    edge = 0.05
    terms = (
        LinguisticTerm(label=TERM_LABELS[0], points=((1.0, edge), (2.5, 1.0), (4.0, 0.0), (10.0, 0.0))),
        LinguisticTerm(label=TERM_LABELS[1], points=((1.0, 0.0), (2.5, 0.0), (4.0, 1.0), (5.5, 0.0), (10.0, 0.0))),
        LinguisticTerm(label=TERM_LABELS[2], points=((1.0, 0.0), (4.0, 0.0), (5.5, 1.0), (7.0, 0.0), (10.0, 0.0))),
        LinguisticTerm(label=TERM_LABELS[3], points=((1.0, 0.0), (5.5, 0.0), (7.0, 1.0), (8.5, 0.0), (10.0, 0.0))),
        LinguisticTerm(label=TERM_LABELS[4], points=((1.0, 0.0), (7.0, 0.0), (8.5, 1.0), (10.0, edge))),
    )
    return LinguisticScale(name=name, universe=UNIVERSE, terms=terms)
