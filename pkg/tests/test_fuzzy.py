import numpy as np
import pytest

from chainrisk.errors import AnalysisError, ErrorCode
from chainrisk.fuzzy import (
    FuzzySet,
    LinguisticScale,
    LinguisticTerm,
    TrapezoidalFuzzyNumber,
    centroid,
    classic_rule_base,
    default_rule_base,
    graded_mean,
    mamdani_infer,
    membership,
    triangular_layout,
)
from chainrisk.fuzzy.inference import firing_strengths, mean_index_rules
from chainrisk.fuzzy.sets import universe_samples
from chainrisk.ingest import dump_rule_base, parse_rule_base


class TestGradedMean:
    def test_crisp(self):
        assert graded_mean(TrapezoidalFuzzyNumber.crisp(1.0)) == 1.0

    def test_trapezoid(self):
        assert graded_mean(TrapezoidalFuzzyNumber(l=2, m=4, n=6, o=8)) == pytest.approx(5.0)

    def test_symmetric(self):
        assert graded_mean(TrapezoidalFuzzyNumber(l=1, m=3, n=5, o=7)) == pytest.approx(4.0)

    def test_unordered_corners_rejected(self):
        with pytest.raises(ValueError):
            TrapezoidalFuzzyNumber(l=3, m=2, n=4, o=5)


class TestMembership:
    def test_shoulders(self):
        scale = triangular_layout("P")
        assert membership(scale, "Very High", 10.0) == 1.0
        assert membership(scale, "Very Low", 10.0) == 0.0
        assert membership(scale, "Very Low", 1.0) == 1.0

    def test_midway_between_centres(self):
        scale = triangular_layout("P")
        # Medium centred on 5.5, High on 7.75
        assert membership(scale, "Medium", 6.625) == pytest.approx(0.5)
        assert membership(scale, "High", 6.625) == pytest.approx(0.5)

    def test_partition_of_unity(self):
        scale = triangular_layout("AI")
        for x in np.linspace(1.0, 10.0, 37):
            assert scale.degrees(float(x)).sum() == pytest.approx(1.0)

    def test_unknown_term(self):
        with pytest.raises(AnalysisError) as exc:
            membership(triangular_layout("P"), "Extreme", 5.0)
        assert exc.value.code is ErrorCode.UNKNOWN_TERM

    def test_out_of_universe(self):
        with pytest.raises(AnalysisError) as exc:
            membership(triangular_layout("P"), "Low", 11.0)
        assert exc.value.code is ErrorCode.OUT_OF_UNIVERSE

    def test_scale_needs_five_terms(self):
        terms = tuple(LinguisticTerm(label=f"t{i}", points=((1.0, 1.0), (10.0, 1.0))) for i in range(4))
        with pytest.raises(ValueError):
            LinguisticScale(name="bad", terms=terms)


class TestMamdani:
    def test_single_rule_at_full_strength(self):
        rb = classic_rule_base()
        out = mamdani_infer(rb, 5.5, 5.5, 5.5)
        medium = rb.output_scale.sampled()[2]
        np.testing.assert_allclose(out.mu, medium, atol=1e-12)

    def test_half_strength_clips(self):
        rb = classic_rule_base()
        # P sits halfway between Medium and High; both rules conclude Medium
        out = mamdani_infer(rb, 6.625, 5.5, 5.5)
        medium = rb.output_scale.sampled()[2]
        np.testing.assert_allclose(out.mu, np.minimum(medium, 0.5), atol=1e-9)
        assert out.height == pytest.approx(0.5)

    def test_max_aggregation_bounds(self):
        rb = classic_rule_base()
        p, ai, d = 3.7, 6.1, 8.2
        out = mamdani_infer(rb, p, ai, d)
        strengths = firing_strengths(rb, p, ai, d)
        curves = rb.output_scale.sampled()
        table = rb.output_table()
        assert np.all(out.mu <= 1.0)
        for (i, j, k), w in np.ndenumerate(strengths):
            if w > 0:
                assert np.all(out.mu >= np.minimum(w, curves[table[i, j, k]]) - 1e-12)

    def test_default_base_sum_stays_bounded(self):
        out = mamdani_infer(default_rule_base(), 2.3, 7.9, 4.4)
        assert np.all((out.mu >= 0.0) & (out.mu <= 1.0))

    def test_rule_table_is_complete(self):
        rules = mean_index_rules()
        assert len(rules) == 125
        assert (0, 0, 0, 0) in rules
        assert (4, 4, 4, 4) in rules
        assert (4, 0, 0, 1) in rules


class TestCentroid:
    def test_symmetric_set(self):
        xs = universe_samples()
        mu = np.exp(-((xs - 5.5) ** 2))
        assert centroid(FuzzySet(xs=xs, mu=mu)) == pytest.approx(5.5, abs=1e-9)

    def test_medium_term(self):
        medium = triangular_layout("RCN").sampled()[2]
        assert centroid(FuzzySet.from_degrees(medium)) == pytest.approx(5.5, abs=1e-9)

    def test_empty_set(self):
        with pytest.raises(AnalysisError) as exc:
            centroid(FuzzySet.from_degrees(np.zeros(901)))
        assert exc.value.code is ErrorCode.EMPTY_SET


def test_rule_base_json_round_trip():
    rb = default_rule_base()
    again = parse_rule_base(dump_rule_base(rb))
    assert again.rules == rb.rules
    assert again.operators == rb.operators
    assert again.output_scale == rb.output_scale
