"""Outranking aggregation, ideal-point ranking and rank comparison."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from tensorank import (
    CriterionFeatureDirections,
    DecisionMatrix,
    FeatureTensor,
    PreferenceMatrix,
    ValidationError,
    WeightScheme,
    global_preference,
    net_flow,
    pairwise_differences,
    promethee_matrix,
    promethee_pipeline,
    promethee_tensor,
    rank_distance,
    rank_from_scores,
    topsis_tensor,
    usual_preference,
)
from tensorank.experiments.oracles import oracle_kendall_tau, oracle_net_flow

ALT_NAMES = tuple(f"A{i}" for i in range(8))
CRIT_NAMES = tuple(f"C{j}" for j in range(4))
FEAT_NAMES = tuple(f"F{l}" for l in range(4))


def make_case(values, signs, weights=None):
    """Bundle raw arrays into the typed inputs of the aggregation stage."""
    values = np.asarray(values, dtype=float)
    signs = np.asarray(signs)
    n, m, w = values.shape
    features = FeatureTensor(values, ALT_NAMES[:n], CRIT_NAMES[:m], FEAT_NAMES[:w])
    dirs = CriterionFeatureDirections(
        CRIT_NAMES[:m],
        FEAT_NAMES[:w],
        tuple("max" if signs[j, 0] > 0 else "min" for j in range(m)),
        tuple(
            tuple("max" if signs[j, l] > 0 else "min" for l in range(w))
            for j in range(m)
        ),
    )
    scheme = None
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        scheme = WeightScheme(CRIT_NAMES[:m], FEAT_NAMES[:w], weights / weights.sum())
    return features, dirs, scheme


@st.composite
def aggregation_cases(draw):
    n = draw(st.integers(2, 5))
    m = draw(st.integers(1, 3))
    w = draw(st.integers(1, 3))
    # values live on a 0.001 grid so that strictly increasing transforms in
    # float arithmetic can never collapse two distinct cells into a tie
    values = draw(
        hnp.arrays(
            float,
            (n, m, w),
            elements=st.integers(-10**6, 10**6).map(lambda v: v / 1000.0),
        )
    )
    signs = draw(hnp.arrays(np.int8, (m, w), elements=st.sampled_from([1, -1])))
    raw = draw(hnp.arrays(float, (m, w), elements=st.floats(0.05, 1.0)))
    return make_case(values, signs, raw)


class TestWeightScheme:
    def test_uniform_grid(self):
        s = WeightScheme.uniform(("a", "b"), ("x", "y", "z"))
        assert s.values.shape == (2, 3)
        assert s.values.sum() == pytest.approx(1.0, abs=1e-12)

    def test_from_criterion_weights_spreads_over_features(self):
        s = WeightScheme.from_criterion_weights({"a": 3.0, "b": 1.0}, ("x", "y"))
        np.testing.assert_allclose(s.values, [[0.375, 0.375], [0.125, 0.125]])

    def test_rejects_negative(self):
        with pytest.raises(ValidationError, match="non-negative"):
            WeightScheme.from_criterion_weights({"a": -1.0, "b": 2.0})

    def test_rejects_all_zero(self):
        with pytest.raises(ValidationError, match="not all be zero"):
            WeightScheme.from_criterion_weights({"a": 0.0, "b": 0.0})

    def test_rejects_bad_sum(self):
        with pytest.raises(ValidationError, match="sum to 1"):
            WeightScheme(("a",), ("x",), np.array([[0.5]]))

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValidationError, match="shape"):
            WeightScheme(("a", "b"), ("x",), np.array([[1.0]]))


class TestPairwiseDifferences:
    def test_antisymmetric_with_zero_diagonal(self):
        features, dirs, _ = make_case(
            np.random.default_rng(0).normal(size=(4, 2, 2)), np.ones((2, 2))
        )
        d = pairwise_differences(features, dirs).values
        np.testing.assert_allclose(d, -d.transpose(1, 0, 2, 3))
        assert np.abs(d[np.arange(4), np.arange(4)]).max() == 0.0

    def test_minimize_cells_flip_the_sign(self):
        features, dirs, _ = make_case([[[1.0]], [[3.0]]], [[-1]])
        d = pairwise_differences(features, dirs).values
        # smaller is better, so the first alternative is preferred
        assert d[0, 1, 0, 0] == 2.0
        assert d[1, 0, 0, 0] == -2.0

    def test_two_sentinels_tie_instead_of_producing_nan(self):
        features, dirs, _ = make_case([[[np.inf]], [[np.inf]]], [[-1]])
        d = pairwise_differences(features, dirs).values
        assert d[0, 1, 0, 0] == 0.0
        assert d[1, 0, 0, 0] == 0.0

    def test_sentinel_loses_against_finite(self):
        features, dirs, _ = make_case([[[np.inf]], [[0.3]]], [[-1]])
        d = pairwise_differences(features, dirs).values
        assert d[0, 1, 0, 0] == -np.inf
        assert d[1, 0, 0, 0] == np.inf

    def test_needs_two_alternatives(self):
        features, dirs, _ = make_case([[[1.0]]], [[1]])
        with pytest.raises(ValidationError, match="at least 2"):
            pairwise_differences(features, dirs)

    def test_misaligned_directions(self):
        features, _, _ = make_case([[[1.0]], [[2.0]]], [[1]])
        other = CriterionFeatureDirections(("other",), ("F0",), ("max",), (("max",),))
        with pytest.raises(ValidationError, match="do not match"):
            pairwise_differences(features, other)


class TestPreferenceAndFlows:
    def test_usual_preference_values(self):
        assert usual_preference(3.0) == 1.0
        assert usual_preference(0.0) == 0.5
        assert usual_preference(-2.0) == 0.0
        np.testing.assert_array_equal(
            usual_preference(np.array([np.inf, -np.inf])), [1.0, 0.0]
        )

    def test_two_alternative_dominance(self):
        features, dirs, _ = make_case([[[1.0]], [[0.0]]], [[1]])
        result = promethee_tensor(features, dirs)
        np.testing.assert_allclose(result.scores, [1.0, -1.0])
        assert result.ordering == ("A0", "A1")

    def test_three_alternative_chain(self):
        features, dirs, _ = make_case([[[3.0]], [[2.0]], [[1.0]]], [[1]])
        result = promethee_tensor(features, dirs)
        np.testing.assert_allclose(result.scores, [1.0, 0.0, -1.0])
        assert result.ordering == ("A0", "A1", "A2")

    def test_all_equal_scores_tie_in_input_order(self):
        features, dirs, _ = make_case([[[2.0]], [[2.0]], [[2.0]]], [[1]])
        result = promethee_tensor(features, dirs)
        np.testing.assert_allclose(result.scores, [0.0, 0.0, 0.0])
        assert result.ordering == ("A0", "A1", "A2")
        assert result.tie_groups == (("A0", "A1", "A2"),)

    def test_net_flow_rejects_negative_preference(self):
        pi = PreferenceMatrix(np.array([[0.0, -0.1], [0.2, 0.0]]), ("a", "b"))
        with pytest.raises(ValidationError, match="non-negative"):
            net_flow(pi)

    def test_net_flow_rejects_nonzero_diagonal(self):
        pi = PreferenceMatrix(np.array([[0.3, 0.1], [0.2, 0.0]]), ("a", "b"))
        with pytest.raises(ValidationError, match="zero diagonal"):
            net_flow(pi)

    def test_weight_grid_must_match_axes(self):
        features, dirs, _ = make_case([[[1.0]], [[2.0]]], [[1]])
        other = WeightScheme(("other",), ("F0",), np.array([[1.0]]))
        with pytest.raises(ValidationError, match="does not match"):
            global_preference(pairwise_differences(features, dirs), other)


class TestOutrankingProperties:
    @settings(max_examples=150, deadline=None)
    @given(aggregation_cases())
    def test_flows_sum_to_zero_and_stay_bounded(self, case):
        features, dirs, scheme = case
        result = promethee_tensor(features, dirs, scheme)
        assert abs(result.scores.sum()) < 1e-9
        assert (result.scores >= -1.0 - 1e-12).all()
        assert (result.scores <= 1.0 + 1e-12).all()

    @settings(max_examples=150, deadline=None)
    @given(aggregation_cases())
    def test_preference_complementarity(self, case):
        features, dirs, scheme = case
        run = promethee_pipeline(features, dirs, scheme)
        pi = run.preference.values
        n = pi.shape[0]
        off = ~np.eye(n, dtype=bool)
        np.testing.assert_allclose((pi + pi.T)[off], 1.0, atol=1e-12)
        assert np.abs(np.diagonal(pi)).max() == 0.0

    @settings(max_examples=150, deadline=None)
    @given(aggregation_cases())
    def test_flows_match_the_brute_force_oracle(self, case):
        features, dirs, scheme = case
        result = promethee_tensor(features, dirs, scheme)
        expected = oracle_net_flow(features.values, dirs.signs(), scheme.values)
        np.testing.assert_allclose(result.scores, expected, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(aggregation_cases(), st.integers(0, 2**31 - 1))
    def test_monotone_transforms_leave_everything_bit_identical(self, case, seed):
        features, dirs, scheme = case
        rng = np.random.default_rng(seed)
        transformed = features.values.copy()
        for j in range(features.n_criteria):
            for l in range(features.n_features):
                kind = rng.integers(0, 3)
                col = transformed[:, j, l]
                if kind == 0:
                    col = rng.uniform(0.1, 3.0) * col + rng.uniform(-5, 5)
                elif kind == 1:
                    col = np.arctan(col)
                else:
                    col = col**3
                transformed[:, j, l] = col
        other = FeatureTensor(
            transformed, features.alternative_ids, features.criterion_ids, features.feature_ids
        )
        base = promethee_pipeline(features, dirs, scheme)
        trans = promethee_pipeline(other, dirs, scheme)
        np.testing.assert_array_equal(base.preference.values, trans.preference.values)
        np.testing.assert_array_equal(base.ranking.scores, trans.ranking.scores)
        assert base.ranking.ordering == trans.ranking.ordering

    @settings(max_examples=100, deadline=None)
    @given(aggregation_cases(), st.integers(0, 2**31 - 1))
    def test_dominating_alternative_outranks(self, case, seed):
        features, dirs, scheme = case
        rng = np.random.default_rng(seed)
        n = features.n_alternatives
        i, k = rng.choice(n, size=2, replace=False)
        values = features.values.copy()
        bump = rng.uniform(0.0, 1.0, size=values.shape[1:])
        bump.flat[rng.integers(bump.size)] += 1.0  # strict on at least one cell
        values[i] = values[k] + dirs.signs() * bump
        dominated = FeatureTensor(
            values, features.alternative_ids, features.criterion_ids, features.feature_ids
        )
        result = promethee_tensor(dominated, dirs, scheme)
        assert result.scores[i] > result.scores[k]

    @settings(max_examples=100, deadline=None)
    @given(aggregation_cases(), st.integers(0, 2**31 - 1))
    def test_criterion_permutation_consistency(self, case, seed):
        features, dirs, scheme = case
        rng = np.random.default_rng(seed)
        perm = rng.permutation(features.n_criteria)
        permuted = FeatureTensor(
            features.values[:, perm, :],
            features.alternative_ids,
            tuple(features.criterion_ids[j] for j in perm),
            features.feature_ids,
        )
        pdirs = CriterionFeatureDirections(
            permuted.criterion_ids,
            dirs.feature_ids,
            tuple(dirs.base[j] for j in perm),
            tuple(dirs.cells[j] for j in perm),
        )
        pscheme = WeightScheme(
            permuted.criterion_ids, scheme.feature_ids, scheme.values[perm]
        )
        base = promethee_tensor(features, dirs, scheme)
        other = promethee_tensor(permuted, pdirs, pscheme)
        np.testing.assert_allclose(other.scores, base.scores, atol=1e-12)


class TestMatrixMode:
    def test_matches_single_feature_tensor_path(self):
        rng = np.random.default_rng(5)
        values = rng.normal(size=(4, 3))
        matrix = DecisionMatrix(values, ALT_NAMES[:4], CRIT_NAMES[:3])
        directions = {"C0": "max", "C1": "min", "C2": "max"}
        features, dirs, _ = make_case(
            values[:, :, None], np.array([[1], [-1], [1]])
        )
        assert (
            promethee_matrix(matrix, directions).ordering
            == promethee_tensor(features, dirs).ordering
        )

    def test_criterion_weights_are_honoured(self):
        matrix = DecisionMatrix(np.array([[1.0, 0.0], [0.0, 1.0]]), ("a", "b"), ("c1", "c2"))
        directions = {"c1": "max", "c2": "max"}
        heavy_c1 = promethee_matrix(matrix, directions, {"c1": 9.0, "c2": 1.0})
        heavy_c2 = promethee_matrix(matrix, directions, {"c1": 1.0, "c2": 9.0})
        assert heavy_c1.ordering == ("a", "b")
        assert heavy_c2.ordering == ("b", "a")

    def test_direction_keys_must_match_matrix_order(self):
        matrix = DecisionMatrix(np.ones((2, 2)), ("a", "b"), ("c1", "c2"))
        with pytest.raises(ValidationError, match="do not match matrix criteria"):
            promethee_matrix(matrix, {"c2": "max", "c1": "max"})


class TestRanking:
    def test_rank_from_scores_orders_descending(self):
        r = rank_from_scores(("a", "b", "c"), [0.1, 0.9, -0.3])
        assert r.ordering == ("b", "a", "c")
        assert r.tie_groups == ()

    def test_near_equal_scores_form_a_tie_group_in_input_order(self):
        r = rank_from_scores(("a", "b", "c"), [1.0 - 5e-13, 1.0, 0.5])
        assert r.ordering == ("a", "b", "c")
        assert r.tie_groups == (("a", "b"),)

    def test_score_of(self):
        r = rank_from_scores(("a", "b"), [0.25, 0.75])
        assert r.score_of("a") == 0.25


class TestTopsis:
    def test_two_alternative_extremes(self):
        features, dirs, _ = make_case([[[2.0]], [[1.0]]], [[1]])
        result = topsis_tensor(features, dirs)
        np.testing.assert_allclose(result.scores, [1.0, 0.0])

    def test_scores_lie_in_unit_interval(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            features, dirs, scheme = make_case(
                rng.normal(size=(4, 2, 2)) + 5.0,
                rng.choice([1, -1], size=(2, 2)),
                rng.uniform(0.1, 1.0, size=(2, 2)),
            )
            result = topsis_tensor(features, dirs, scheme)
            assert (result.scores >= 0.0).all() and (result.scores <= 1.0).all()

    def test_invariant_under_positive_column_scaling(self):
        rng = np.random.default_rng(13)
        values = rng.normal(size=(4, 2, 2)) + 3.0
        features, dirs, scheme = make_case(values, np.ones((2, 2)))
        scaled = values.copy()
        scaled[:, 1, 0] *= 37.5
        other = FeatureTensor(
            scaled, features.alternative_ids, features.criterion_ids, features.feature_ids
        )
        np.testing.assert_allclose(
            topsis_tensor(other, dirs).scores,
            topsis_tensor(features, dirs).scores,
            atol=1e-12,
        )

    def test_rejects_non_finite_features(self):
        features, dirs, _ = make_case([[[np.inf]], [[1.0]]], [[-1]])
        with pytest.raises(ValidationError, match="requires finite"):
            topsis_tensor(features, dirs)

    def test_rejects_all_zero_column(self):
        features, dirs, _ = make_case([[[0.0]], [[0.0]]], [[1]])
        with pytest.raises(ValidationError, match="all-zero column"):
            topsis_tensor(features, dirs)


class TestRankDistance:
    def test_identical_orderings(self):
        a = rank_from_scores(("x", "y", "z"), [3.0, 2.0, 1.0])
        cmp = rank_distance(a, a)
        assert cmp.tau == 1.0 and cmp.identical

    def test_reversed_orderings(self):
        a = rank_from_scores(("x", "y", "z"), [3.0, 2.0, 1.0])
        b = rank_from_scores(("x", "y", "z"), [1.0, 2.0, 3.0])
        cmp = rank_distance(a, b)
        assert cmp.tau == -1.0 and not cmp.identical
        assert cmp.pairs == 3

    def test_matches_pairwise_oracle(self):
        rng = np.random.default_rng(17)
        ids = tuple("abcdef")
        for _ in range(25):
            s1, s2 = rng.normal(size=(2, 6))
            a = rank_from_scores(ids, s1)
            b = rank_from_scores(ids, s2)
            assert rank_distance(a, b).tau == pytest.approx(
                oracle_kendall_tau(a.ordering, b.ordering)
            )

    def test_rejects_different_alternative_sets(self):
        a = rank_from_scores(("x", "y"), [1.0, 0.0])
        b = rank_from_scores(("x", "z"), [1.0, 0.0])
        with pytest.raises(ValidationError, match="different alternative sets"):
            rank_distance(a, b)
