"""Tests for the GOSPA / OSPA metric family."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gospa.metrics import (
    GospaParams,
    as_state_array,
    cutoff_distance,
    gospa,
    gospa_permutation_form,
    ospa,
    unnormalized_ospa_closed_form,
)

from oracles import gospa_alpha2_assignment_oracle, gospa_permutation_oracle

# Two well-separated truths, one close estimate pair, one far clutter point.
EXAMPLE_TRUTH = [[0.0, 0.0], [100.0, 0.0]]
EXAMPLE_EST_WITH_FALSE = [[1.0, 0.0], [50.0, 50.0]]
EXAMPLE_EST_MISSING = [[1.0, 0.0]]
EXAMPLE_PARAMS = GospaParams(c=8.0, alpha=2.0, p=1.0)


class TestCutoffDistance:
    def test_identical_points(self):
        assert cutoff_distance([1.0, 2.0], [1.0, 2.0], c=5.0) == 0.0

    def test_below_cutoff(self):
        assert cutoff_distance([0.0], [3.0], c=8.0) == pytest.approx(3.0)

    def test_saturates(self):
        assert cutoff_distance([0.0], [100.0], c=8.0) == pytest.approx(8.0)

    def test_manhattan(self):
        assert cutoff_distance([0.0, 0.0], [1.0, 2.0], c=8.0,
                               base_distance="manhattan") == pytest.approx(3.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            cutoff_distance([0.0], [0.0, 1.0], c=8.0)

    def test_invalid_cutoff(self):
        with pytest.raises(ValueError):
            cutoff_distance([0.0], [1.0], c=0.0)


class TestParams:
    @pytest.mark.parametrize("kwargs", [
        {"c": 0.0}, {"c": -1.0}, {"c": math.inf},
        {"c": 8.0, "alpha": 0.0}, {"c": 8.0, "alpha": 2.5}, {"c": 8.0, "alpha": -1.0},
        {"c": 8.0, "p": 0.5}, {"c": 8.0, "p": math.inf},
        {"c": 8.0, "base_distance": "chebyshev"},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GospaParams(**kwargs)

    def test_defaults(self):
        params = GospaParams(c=8.0)
        assert params.alpha == 2.0 and params.p == 1.0
        assert params.base_distance == "euclidean"


class TestGospaGolden:
    def test_both_empty(self):
        result = gospa([], [], EXAMPLE_PARAMS)
        assert result.total == 0.0
        assert result.has_decomposition
        assert result.missed_count == 0 and result.false_count == 0

    def test_one_empty_alpha2(self):
        result = gospa([[1.0, 2.0]], [], EXAMPLE_PARAMS)
        assert result.total == pytest.approx(4.0)
        assert result.missed_count == 1 and result.false_count == 0
        assert result.assignment.pairs == ()

    def test_two_targets_one_false_one_missed(self):
        result = gospa(EXAMPLE_TRUTH, EXAMPLE_EST_WITH_FALSE, EXAMPLE_PARAMS)
        assert result.total == pytest.approx(9.0)
        assert result.localization_cost_p == pytest.approx(1.0)
        assert result.missed_count == 1 and result.false_count == 1
        assert result.missed_cost_p == pytest.approx(4.0)
        assert result.false_cost_p == pytest.approx(4.0)
        assert result.assignment.pairs == ((0, 0),)

    def test_two_targets_one_missed(self):
        result = gospa(EXAMPLE_TRUTH, EXAMPLE_EST_MISSING, EXAMPLE_PARAMS)
        assert result.total == pytest.approx(5.0)
        assert result.missed_count == 1 and result.false_count == 0

    def test_empty_truth_alpha1_counts_false_targets(self):
        params = GospaParams(c=8.0, alpha=1.0, p=1.0)
        result = gospa([], [[0.0, 0.0], [100.0, 0.0], [50.0, 50.0]], params)
        assert result.total == pytest.approx(24.0)
        assert not result.has_decomposition

    def test_pair_at_exact_cutoff_counts_missed_and_false(self):
        # strict d < c rule: a pair at exactly c is reclassified, cost-neutral
        result = gospa([[0.0]], [[8.0]], GospaParams(c=8.0, alpha=2.0, p=1.0))
        assert result.total == pytest.approx(8.0)
        assert result.assignment.pairs == ()
        assert result.missed_count == 1 and result.false_count == 1

    def test_duplicates_multiset_semantics(self):
        a = [[1.0, 1.0], [1.0, 1.0]]
        assert gospa(a, a, EXAMPLE_PARAMS).total == 0.0
        result = gospa(a, [[1.0, 1.0]], EXAMPLE_PARAMS)
        assert result.total == pytest.approx(4.0)
        assert result.missed_count == 1

    def test_alpha_not_two_has_no_decomposition(self):
        result = gospa(EXAMPLE_TRUTH, EXAMPLE_EST_WITH_FALSE,
                       GospaParams(c=8.0, alpha=1.5, p=1.0))
        assert not result.has_decomposition
        assert result.localization_cost_p is None
        assert result.missed_count is None and result.false_count is None
        assert result.assignment is None

    def test_manhattan_base(self):
        params = GospaParams(c=8.0, alpha=2.0, p=1.0, base_distance="manhattan")
        result = gospa([[0.0, 0.0]], [[1.0, 2.0]], params)
        assert result.total == pytest.approx(3.0)

    def test_callable_base(self):
        half_euclid = lambda a, b: 0.5 * float(np.linalg.norm(a - b))
        params = GospaParams(c=8.0, alpha=2.0, p=1.0, base_distance=half_euclid)
        result = gospa([[0.0, 0.0]], [[2.0, 0.0]], params)
        assert result.total == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            gospa([[0.0, 1.0]], [[0.0, 1.0, 2.0]], EXAMPLE_PARAMS)

    def test_non_finite_coordinates(self):
        with pytest.raises(ValueError, match="finite"):
            gospa([[np.nan, 0.0]], [[0.0, 0.0]], EXAMPLE_PARAMS)

    def test_ragged_input(self):
        with pytest.raises(ValueError):
            gospa([[0.0, 1.0], [0.0]], [[0.0, 1.0]], EXAMPLE_PARAMS)


class TestPermutationForm:
    def test_self_distance_zero(self):
        points = [[0.0, 1.0], [5.0, -2.0]]
        assert gospa_permutation_form(points, points, EXAMPLE_PARAMS) == 0.0

    def test_example_geometry(self):
        assert gospa_permutation_form(
            EXAMPLE_TRUTH, EXAMPLE_EST_WITH_FALSE, EXAMPLE_PARAMS) == pytest.approx(9.0)
        assert gospa_permutation_form(
            EXAMPLE_TRUTH, EXAMPLE_EST_MISSING, EXAMPLE_PARAMS) == pytest.approx(5.0)

    def test_single_saturated_pair_alpha1(self):
        params = GospaParams(c=8.0, alpha=1.0, p=1.0)
        assert gospa_permutation_form([[0.0]], [[20.0]], params) == pytest.approx(8.0)

    def test_empty_cases(self):
        params = GospaParams(c=8.0, alpha=1.0, p=2.0)
        assert gospa_permutation_form([], [], params) == 0.0
        assert gospa_permutation_form([], [[0.0]], params) == pytest.approx(8.0)


class TestOspa:
    def test_empty_versus_any_estimate_is_cutoff(self):
        for j in range(1, 11):
            points = [[float(50 * k), 0.0] for k in range(j)]
            assert ospa([], points, c=8.0, p=1.0) == pytest.approx(8.0)
            assert ospa([], points, c=8.0, p=2.0) == pytest.approx(8.0)

    def test_example_geometry_cannot_distinguish(self):
        assert ospa(EXAMPLE_TRUTH, EXAMPLE_EST_WITH_FALSE, c=8.0, p=1.0) == pytest.approx(4.5)
        assert ospa(EXAMPLE_TRUTH, EXAMPLE_EST_MISSING, c=8.0, p=1.0) == pytest.approx(4.5)

    def test_identical_sets(self):
        points = [[0.0, 1.0], [2.0, 3.0]]
        assert ospa(points, points, c=8.0, p=2.0) == 0.0

    def test_both_empty(self):
        assert ospa([], [], c=8.0, p=1.0) == 0.0


class TestClosedForm:
    def test_reference_values(self):
        assert unnormalized_ospa_closed_form(3, 2, 0.0, 0.0, c=8.0, p=1.0) == pytest.approx(24.0)
        assert unnormalized_ospa_closed_form(10, 2, 0.0, 0.0, c=8.0, p=2.0) == pytest.approx(
            math.sqrt(640.0))
        assert unnormalized_ospa_closed_form(1, 2, 0.0, 0.0, c=8.0, p=2.0) == pytest.approx(
            math.sqrt(128.0))

    def test_detected_distances_enter(self):
        value = unnormalized_ospa_closed_form(2, 0, 1.0, 3.0, c=8.0, p=1.0)
        assert value == pytest.approx(1.0 + 3.0 + 16.0)
        value = unnormalized_ospa_closed_form(0, 1, 2.0, 0.0, c=8.0, p=2.0)
        assert value == pytest.approx(math.sqrt(4.0 + 64.0))

    @pytest.mark.parametrize("kwargs", [
        {"n_false": -1, "n_missed": 0}, {"n_false": 0, "n_missed": 3},
        {"n_false": 0, "n_missed": 0, "d1": 9.0}, {"n_false": 0, "n_missed": 0, "d2": -1.0},
        {"n_false": 0, "n_missed": 0, "c": 0.0}, {"n_false": 0, "n_missed": 0, "p": 0.5},
    ])
    def test_rejects_out_of_range(self, kwargs):
        full = {"n_false": 0, "n_missed": 0, "d1": 0.0, "d2": 0.0, "c": 8.0, "p": 1.0}
        full.update(kwargs)
        with pytest.raises(ValueError):
            unnormalized_ospa_closed_form(**full)


def small_sets(max_size=4, dim=2):
    return st.integers(0, max_size).flatmap(
        lambda n: arrays(np.float64, (n, dim),
                         elements=st.floats(-20.0, 20.0, allow_nan=False)))


def param_sets():
    return st.builds(
        GospaParams,
        c=st.floats(0.5, 10.0, allow_nan=False),
        alpha=st.floats(0.05, 2.0, allow_nan=False),
        p=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
    )


@settings(max_examples=200, deadline=None)
@given(small_sets(), small_sets(), param_sets())
def test_matches_permutation_oracle_any_alpha(x, y, params):
    expected = gospa_permutation_oracle(x, y, params.c, params.alpha, params.p)
    assert gospa(x, y, params).total == pytest.approx(expected, rel=1e-9, abs=1e-12)
    assert gospa_permutation_form(x, y, params) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(small_sets(), small_sets(), st.floats(0.5, 10.0, allow_nan=False),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_alpha2_matches_assignment_set_oracle(x, y, c, p):
    params = GospaParams(c=c, alpha=2.0, p=p)
    expected = gospa_alpha2_assignment_oracle(x, y, c, p)
    assert gospa(x, y, params).total == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(small_sets(), small_sets(), param_sets())
def test_symmetry_and_nonnegativity(x, y, params):
    forward = gospa(x, y, params).total
    backward = gospa(y, x, params).total
    assert forward >= 0.0
    assert forward == pytest.approx(backward, rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(small_sets(), param_sets(), st.randoms(use_true_random=False))
def test_definiteness(x, params, rnd):
    order = list(range(len(x)))
    rnd.shuffle(order)
    assert gospa(x, x[order] if len(x) else x, params).total == 0.0
    shifted = x + 0.5 if len(x) else np.array([[0.0, 0.0]])
    assert gospa(x, shifted, params).total > 0.0


@settings(max_examples=150, deadline=None)
@given(small_sets(), small_sets(), small_sets(), param_sets())
def test_triangle_inequality(x, y, z, params):
    d_xy = gospa(x, y, params).total
    d_xz = gospa(x, z, params).total
    d_zy = gospa(z, y, params).total
    assert d_xy <= d_xz + d_zy + 1e-9


@settings(max_examples=150, deadline=None)
@given(small_sets(), small_sets(), st.floats(0.5, 10.0, allow_nan=False),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_decomposition_identity_and_upper_bound(x, y, c, p):
    params = GospaParams(c=c, alpha=2.0, p=p)
    result = gospa(x, y, params)
    reconstructed = (result.localization_cost_p + result.missed_cost_p
                     + result.false_cost_p)
    assert result.total ** p == pytest.approx(reconstructed, rel=1e-9, abs=1e-12)
    assert result.missed_count == len(x) - len(result.assignment)
    assert result.false_count == len(y) - len(result.assignment)
    empty_assignment_bound = (c ** p / 2.0) * (len(x) + len(y))
    assert result.total ** p <= empty_assignment_bound * (1 + 1e-12) + 1e-12


@settings(max_examples=150, deadline=None)
@given(small_sets(), small_sets(), st.floats(0.5, 10.0, allow_nan=False),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_ospa_relation(x, y, c, p):
    if len(x) == 0 and len(y) == 0:
        assert ospa(x, y, c=c, p=p) == 0.0
        return
    unnormalized = gospa(x, y, GospaParams(c=c, alpha=1.0, p=p)).total
    expected = unnormalized / max(len(x), len(y)) ** (1.0 / p)
    assert ospa(x, y, c=c, p=p) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(small_sets(), small_sets(), st.floats(0.5, 10.0, allow_nan=False),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_far_point_costs_half_cutoff_power(x, y, c, p):
    params = GospaParams(c=c, alpha=2.0, p=p)
    base = gospa(x, y, params).total ** p
    far = np.array([[1e6, 1e6]])
    augmented = np.vstack([y, far]) if len(y) else far
    grown = gospa(x, augmented, params).total ** p
    assert grown - base == pytest.approx(c ** p / 2.0, rel=1e-9, abs=1e-9)


def test_as_state_array_shapes():
    assert as_state_array([]).shape == (0, 0)
    assert as_state_array(np.zeros((0, 3))).shape == (0, 3)
    assert as_state_array([[1, 2], [3, 4]]).shape == (2, 2)
    with pytest.raises(ValueError):
        as_state_array([1.0, 2.0])
    with pytest.raises(ValueError):
        as_state_array([[[1.0]]])
