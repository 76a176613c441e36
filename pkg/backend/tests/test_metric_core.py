"""Tests for elemental metrics, normalization and the weighted product metric."""

import numpy as np
import pytest

from app.core.exceptions import (
    GraphFormatError,
    InvalidParameterError,
    SaturatedDistanceError,
    SymmetryError,
)
from app.models.metric import MetricKind
from app.services.metric_core import (
    discrete_metric,
    elemental_distances,
    half_absolute_metric,
    log_complement,
    log_domain_transform,
    normalize_metric,
    read_distance_table,
    subadditive_transform,
    table_metric,
    triangle_violation,
    weighted_product_distance,
)


class TestElementalMetrics:
    def test_half_absolute_values(self):
        metric = half_absolute_metric()
        assert metric.evaluate(0.0, 1.0) == 0.5
        assert metric.evaluate(0.3, 0.3) == 0.0
        assert metric.evaluate(0.0, 5.0) == 1.0

    def test_half_absolute_accepts_complex(self):
        assert half_absolute_metric().evaluate(0.2 + 0j, 0.8 + 0j) == pytest.approx(0.3)
        assert half_absolute_metric().evaluate(0j, 1j) == pytest.approx(0.5)

    def test_discrete_is_binary(self):
        metric = discrete_metric()
        assert metric.is_binary
        assert metric.evaluate(1, 1) == 0.0
        assert metric.evaluate(0, 1) == 1.0
        assert not half_absolute_metric().is_binary

    def test_vectorized_evaluation(self):
        d = half_absolute_metric().evaluate(np.array([0.0, 0.2]), np.array([1.0, 0.2]))
        np.testing.assert_array_equal(d, [0.5, 0.0])

    def test_triangle_inequality_on_random_triples(self, rng):
        x, y, z = rng.random((3, 10_000))
        assert triangle_violation(half_absolute_metric(), x, y, z) <= 1e-12
        bits = rng.integers(0, 2, size=(3, 10_000))
        assert triangle_violation(discrete_metric(), *bits) <= 1e-12


class TestNormalizeMetric:
    def test_bounded_divides_by_supremum(self):
        metric = normalize_metric(mode="bounded", supremum=2.0)
        assert metric.kind == MetricKind.BOUNDED_RESCALED
        assert metric.evaluate(0.0, 2.0) == 1.0
        assert metric.evaluate(1.5, 1.5) == 0.0

    def test_unbounded_maps_t_over_one_plus_t(self):
        metric = normalize_metric(mode="unbounded")
        assert metric.evaluate(0.0, 3.0) == 0.75
        assert metric.evaluate(4.0, 4.0) == 0.0

    def test_custom_raw_distance(self):
        metric = normalize_metric(lambda a, b: (a - b) ** 2, mode="unbounded")
        assert metric.evaluate(0.0, 1.0) == 0.5

    @pytest.mark.parametrize("supremum", [None, 0.0, -1.0, float("inf")])
    def test_bounded_rejects_bad_supremum(self, supremum):
        with pytest.raises(InvalidParameterError):
            normalize_metric(mode="bounded", supremum=supremum)

    def test_unbounded_preserves_ordering(self, rng):
        metric = normalize_metric(mode="unbounded")
        a, b = rng.random((2, 500)) * 100
        order = np.argsort(np.abs(a - b))
        assert np.all(np.diff(metric.evaluate(a, b)[order]) >= 0)

    @pytest.mark.parametrize("mode, supremum", [("unbounded", None), ("bounded", 4.0)])
    def test_negative_raw_distance_rejected(self, mode, supremum):
        metric = normalize_metric(lambda a, b: a - b, mode=mode, supremum=supremum)
        assert metric.evaluate(3.0, 1.0) == pytest.approx(2.0 / 3.0 if mode == "unbounded" else 0.5)
        with pytest.raises(InvalidParameterError):
            metric.evaluate(0.0, 3.0)


class TestTableMetric:
    def test_valid_table(self):
        metric = table_metric([[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]])
        assert metric.size == 3
        assert metric.evaluate(0, 2) == 1.0
        assert not metric.is_binary

    def test_binary_table(self):
        assert table_metric([[0, 1], [1, 0]]).is_binary

    def test_asymmetric_table_rejected(self):
        with pytest.raises(SymmetryError):
            table_metric([[0, 0.5], [0.25, 0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(InvalidParameterError):
            table_metric([[0.1, 0.5], [0.5, 0]])

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidParameterError):
            table_metric([[0, 2], [2, 0]])

    @pytest.mark.parametrize("x, y", [(-1, 0), (0, 3), (1.7, 0), (np.array([0, 1]), np.array([1, 3]))])
    def test_points_outside_the_table_rejected(self, x, y):
        metric = table_metric([[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]])
        with pytest.raises(InvalidParameterError):
            metric.evaluate(x, y)

    def test_integral_float_points_accepted(self):
        metric = table_metric([[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]])
        assert metric.evaluate(2.0, 1.0) == 0.5

    def test_triangle_exact_by_enumeration(self):
        metric = table_metric([[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]])
        idx = np.array([(a, b, c) for a in range(3) for b in range(3) for c in range(3)]).T
        assert triangle_violation(metric, *idx) <= 0.0

    def test_read_distance_table(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("2\n0,0.25\n0.25,0\n")
        assert read_distance_table(path).evaluate(0, 1) == 0.25

    def test_read_distance_table_wrong_row_count(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("3\n0,1\n1,0\n")
        with pytest.raises(GraphFormatError):
            read_distance_table(path)


class TestLogDomain:
    def test_transform_values(self):
        assert log_domain_transform(0.0) == 0.0
        assert log_domain_transform(0.5) == pytest.approx(np.log(2.0))

    def test_saturated_value_signals(self):
        with pytest.raises(SaturatedDistanceError):
            log_domain_transform(1.0)

    @pytest.mark.parametrize("v", [-0.1, 1.5, float("nan")])
    def test_out_of_domain(self, v):
        with pytest.raises(InvalidParameterError):
            log_domain_transform(v)

    def test_round_trip(self, rng):
        for v in rng.random(200) * 0.999:
            assert abs(subadditive_transform(log_domain_transform(v)) - v) <= 1e-10

    def test_subadditivity(self, rng):
        a, b = rng.exponential(2.0, size=(2, 10_000))
        assert np.all(subadditive_transform(a + b) <= subadditive_transform(a) + subadditive_transform(b) + 1e-12)

    def test_log_complement_masks_saturation(self):
        logs, saturated = log_complement(np.array([0.0, 0.5, 1.0]))
        assert list(saturated) == [False, False, True]
        assert logs[2] == 0.0


class TestWeightedProductDistance:
    metrics = [half_absolute_metric(), half_absolute_metric()]

    def test_example_value(self):
        assert weighted_product_distance([0, 0], [1, 1], self.metrics, [1, 1]) == pytest.approx(0.75)

    def test_identity(self):
        assert weighted_product_distance([0.3, 0.7], [0.3, 0.7], self.metrics, [2.0, 3.0]) == 0.0

    def test_saturated_factor(self):
        assert weighted_product_distance([0, 0.1], [2, 0.1], self.metrics, [1, 4]) == 1.0

    def test_exponents_below_one_rejected(self):
        with pytest.raises(InvalidParameterError):
            weighted_product_distance([0, 0], [1, 1], self.metrics, [0.5, 1])

    def test_length_mismatch(self):
        with pytest.raises(InvalidParameterError):
            weighted_product_distance([0, 0], [1, 1], self.metrics, [1, 1, 1])

    def test_log_matches_direct_and_subadditive_form(self, rng):
        metrics = [half_absolute_metric() for _ in range(5)]
        for _ in range(200):
            x, y = rng.random((2, 5))
            a = 1 + rng.random(5) * 9
            log = weighted_product_distance(x, y, metrics, a)
            direct = weighted_product_distance(x, y, metrics, a, method="direct")
            d = elemental_distances(metrics, x, y)
            assert abs(log - direct) <= 1e-10
            assert abs(log - subadditive_transform(np.sum(-a * np.log1p(-d)))) <= 1e-10

    def test_metric_axioms(self, rng):
        metrics = [half_absolute_metric() for _ in range(4)]
        a = [1.0, 2.0, 3.5, 1.25]
        for _ in range(2_000):
            x, y, z = rng.random((3, 4))
            dxy = weighted_product_distance(x, y, metrics, a)
            assert dxy == weighted_product_distance(y, x, metrics, a)
            assert weighted_product_distance(x, z, metrics, a) <= (
                dxy + weighted_product_distance(y, z, metrics, a) + 1e-12
            )
