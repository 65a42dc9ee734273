"""Feature extraction values, registry handling and direction derivation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorank import (
    DecisionTensor,
    Direction,
    ValidationError,
    derive_directions,
    extract_features,
    feature_average,
    feature_cv,
    feature_slope,
    matrix_directions,
)
from tensorank.features import resolve_features
from tensorank.experiments.oracles import oracle_ols_slope

series = st.lists(
    st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=2, max_size=40
).map(np.array)


class TestFeatureValues:
    def test_average_of_known_series(self):
        assert feature_average([1.0, 2.0, 3.0, 6.0]) == 3.0

    def test_slope_of_exact_line(self):
        assert feature_slope([1.0, 3.0, 5.0, 7.0]) == pytest.approx(2.0, abs=1e-12)

    def test_slope_of_constant_series_is_zero(self):
        assert feature_slope([4.0, 4.0, 4.0]) == 0.0

    def test_slope_matches_direct_least_squares(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            x = rng.normal(0, 5, size=rng.integers(2, 30))
            assert feature_slope(x) == pytest.approx(oracle_ols_slope(x), rel=1e-9, abs=1e-9)

    def test_cv_of_known_series(self):
        # population std of (2, 4) is 1, mean is 3
        assert feature_cv([2.0, 4.0]) == pytest.approx(1.0 / 3.0)

    def test_cv_uses_absolute_mean(self):
        assert feature_cv([-2.0, -4.0]) == feature_cv([2.0, 4.0])

    def test_cv_near_zero_mean_returns_sentinel(self):
        assert feature_cv([-1.0, 1.0]) == math.inf

    def test_minimum_lengths(self):
        assert feature_average([5.0]) == 5.0
        with pytest.raises(ValidationError, match="at least 2"):
            feature_slope([1.0])
        with pytest.raises(ValidationError, match="at least 2"):
            feature_cv([1.0])


class TestFeatureProperties:
    @settings(max_examples=60, deadline=None)
    @given(series, st.floats(0.1, 10), st.floats(-50, 50))
    def test_average_and_slope_are_linear(self, x, a, b):
        assert feature_average(a * x + b) == pytest.approx(
            a * feature_average(x) + b, rel=1e-9, abs=1e-9
        )
        assert feature_slope(a * x + b) == pytest.approx(
            a * feature_slope(x), rel=1e-9, abs=1e-9
        )

    @settings(max_examples=60, deadline=None)
    @given(series)
    def test_slope_of_reversed_series_negates(self, x):
        assert feature_slope(x[::-1]) == pytest.approx(-feature_slope(x), rel=1e-9, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(series, st.floats(0.1, 10))
    def test_cv_is_scale_invariant(self, x, a):
        got, want = feature_cv(a * x), feature_cv(x)
        if math.isinf(want):
            # scaling can move |mean| across the sentinel floor, so only the
            # clearly degenerate case is pinned
            if abs((a * x).mean()) < 1e-12:
                assert math.isinf(got)
        else:
            assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


class TestExtractFeatures:
    def test_shape_and_order(self, small_panel):
        f = extract_features(small_panel, ("average", "slope", "cv"))
        assert f.values.shape == (3, 2, 3)
        assert f.feature_ids == ("average", "slope", "cv")
        fiber = small_panel.fiber("beta", "cost")
        assert f.value("beta", "cost", "average") == pytest.approx(fiber.mean())
        assert f.value("beta", "cost", "slope") == pytest.approx(feature_slope(fiber))
        assert f.value("beta", "cost", "cv") == pytest.approx(feature_cv(fiber))

    def test_aliases_resolve(self, small_panel):
        f = extract_features(small_panel, ("mean", "s.c.", "c.v."))
        assert f.feature_ids == ("average", "slope", "cv")

    def test_permutation_equivariance(self, small_panel):
        f = extract_features(small_panel)
        perm = [2, 0, 1]
        shuffled = DecisionTensor(
            small_panel.values[perm],
            tuple(small_panel.alternative_ids[i] for i in perm),
            small_panel.criterion_ids,
            small_panel.time_labels,
        )
        g = extract_features(shuffled)
        np.testing.assert_array_equal(g.values, f.values[perm])

    def test_too_short_panel_names_the_feature(self):
        t = DecisionTensor(np.ones((1, 1, 1)), ("a",), ("c",), (2000,))
        with pytest.raises(ValidationError, match="'slope' needs at least 2"):
            extract_features(t, ("average", "slope"))

    def test_unknown_feature(self, small_panel):
        with pytest.raises(ValidationError, match="unknown feature"):
            extract_features(small_panel, ("average", "entropy"))

    def test_duplicate_feature(self, small_panel):
        with pytest.raises(ValidationError, match="duplicate feature"):
            extract_features(small_panel, ("average", "mean"))

    def test_empty_feature_set(self, small_panel):
        with pytest.raises(ValidationError, match="must not be empty"):
            extract_features(small_panel, ())


class TestDirections:
    def test_dispersion_is_always_minimized(self):
        d = derive_directions({"up": "max", "down": "min"})
        assert d.direction("up", "average") is Direction.MAXIMIZE
        assert d.direction("up", "slope") is Direction.MAXIMIZE
        assert d.direction("up", "cv") is Direction.MINIMIZE
        assert d.direction("down", "average") is Direction.MINIMIZE
        assert d.direction("down", "cv") is Direction.MINIMIZE

    def test_overrides_win(self):
        d = derive_directions(
            {"up": "max"}, overrides={"up": {"slope": "min", "cv": "max"}}
        )
        assert d.direction("up", "slope") is Direction.MINIMIZE
        assert d.direction("up", "cv") is Direction.MAXIMIZE
        assert d.direction("up", "average") is Direction.MAXIMIZE

    def test_override_for_unknown_criterion(self):
        with pytest.raises(ValidationError, match="unknown criterion"):
            derive_directions({"up": "max"}, overrides={"sideways": {"cv": "max"}})

    def test_matrix_directions_use_base_sense(self):
        d = matrix_directions({"up": "max", "down": "min"})
        assert d.feature_ids == ("value",)
        np.testing.assert_array_equal(d.signs(), [[1.0], [-1.0]])

    def test_resolve_keeps_request_order(self):
        defs = resolve_features(("cv", "average"))
        assert tuple(d.feature_id for d in defs) == ("cv", "average")
