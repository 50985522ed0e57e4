import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsbm.core.errors import (
    EmptySubset,
    InvalidEps,
    InvalidN,
    InvalidTau,
    NonpositiveR,
)
from epsbm.core.models import Subset
from epsbm.geometry import (
    IntermediateIndex,
    diameter,
    distortion_coefficient,
    distortion_coefficients,
    farthest_pair,
    inf_coefficient,
    intermediate_set,
    neighborhood,
    set_distance,
)
from epsbm.geometry.sets import intermediate_membership

from .strategies import dyadic_t, metric_spaces

IDENTITY_GRID = np.linspace(0.001, math.pi - 0.001, 1000)


def test_coefficient_values():
    assert distortion_coefficient(1.0, 0.5, 2) == pytest.approx(1.0674708, abs=1e-7)
    assert distortion_coefficient(math.pi / 2, 0.5, 2) == pytest.approx(
        2**0.25, rel=1e-12
    )
    assert distortion_coefficient(0.0, 0.3, 5) == 1.0


def test_coefficient_infinite_from_pi():
    assert distortion_coefficient(math.pi, 0.5, 2) == math.inf
    assert distortion_coefficient(4.0, 0.2, 3) == math.inf


@pytest.mark.parametrize("n", [1.5, 2, 5, 50])
def test_coefficient_half_identity(n):
    values = distortion_coefficients(IDENTITY_GRID, 0.5, n)
    expected = (1.0 / np.cos(IDENTITY_GRID / 2.0)) ** ((n - 1.0) / n)
    np.testing.assert_allclose(values, expected, rtol=1e-12, atol=0.0)


def test_coefficient_increasing_in_distance():
    values = distortion_coefficients(IDENTITY_GRID, 0.5, 3)
    assert np.all(np.diff(values) > 0)


def test_coefficient_parameter_errors():
    with pytest.raises(InvalidTau):
        distortion_coefficient(1.0, 0.0, 2)
    with pytest.raises(InvalidTau):
        distortion_coefficient(1.0, 1.0, 2)
    with pytest.raises(InvalidN):
        distortion_coefficient(1.0, 0.5, 1.0)
    with pytest.raises(InvalidN):
        distortion_coefficient(1.0, 0.5, math.inf)


@given(
    d=st.floats(min_value=1e-6, max_value=math.pi - 1e-6),
    tau=st.floats(min_value=0.01, max_value=0.99),
    n=st.floats(min_value=1.01, max_value=100.0),
)
def test_coefficient_at_least_one(d, tau, n):
    assert distortion_coefficient(d, tau, n) >= 1.0 - 1e-12


def test_inf_coefficient_witness(path_space):
    value, witness = inf_coefficient(
        path_space, Subset.of([0]), Subset.of([1, 2]), 0.5, 2
    )
    assert witness == (0, 1)
    assert value == pytest.approx(distortion_coefficient(1.0, 0.5, 2))


def test_inf_coefficient_needs_nonempty(path_space):
    with pytest.raises(EmptySubset):
        inf_coefficient(path_space, Subset.of([]), Subset.of([1]), 0.5, 2)


def test_intermediate_midpoint(path_space):
    mid = intermediate_set(path_space, Subset.of([0]), Subset.of([2]), 0.5, 0.0)
    assert mid.indices == (1,)


def test_intermediate_exact_pairs_two_point(two_point_space):
    assert intermediate_set(
        two_point_space, Subset.of([0]), Subset.of([1]), 0.5, 0.0
    ).is_empty()
    assert intermediate_set(
        two_point_space, Subset.of([0]), Subset.of([0]), 0.5, 0.0
    ).indices == (0,)
    everything = intermediate_set(
        two_point_space, Subset.of([0]), Subset.of([1]), 0.5, 0.5
    )
    assert everything.indices == (0, 1)


def test_intermediate_errors(path_space):
    with pytest.raises(InvalidEps):
        intermediate_set(path_space, Subset.of([0]), Subset.of([1]), 0.5, -1.0)
    with pytest.raises(EmptySubset):
        intermediate_set(path_space, Subset.of([]), Subset.of([1]), 0.5, 0.0)


@given(metric_spaces, st.data())
def test_intermediate_index_matches_scan(space, data):
    t = data.draw(st.floats(min_value=0.05, max_value=0.95))
    eps = data.draw(st.floats(min_value=0.0, max_value=0.3))
    indices = st.lists(st.integers(0, space.size - 1), min_size=1, unique=True)
    a0 = Subset.of(data.draw(indices))
    a1 = Subset.of(data.draw(indices))
    index = IntermediateIndex(space, t, eps)
    assert index.lookup(a0, a1) == intermediate_set(space, a0, a1, t, eps)


@given(metric_spaces, dyadic_t, st.data())
def test_intermediate_swap_symmetry(space, t, data):
    eps = data.draw(st.floats(min_value=0.0, max_value=0.3))
    indices = st.lists(st.integers(0, space.size - 1), min_size=1, unique=True)
    a0 = Subset.of(data.draw(indices))
    a1 = Subset.of(data.draw(indices))
    assert intermediate_set(space, a0, a1, t, eps) == intermediate_set(
        space, a1, a0, 1.0 - t, eps
    )


@given(metric_spaces, st.data())
def test_intermediate_monotone_in_eps(space, data):
    small = data.draw(st.floats(min_value=0.0, max_value=0.2))
    large = small + data.draw(st.floats(min_value=0.0, max_value=0.2))
    rows = np.arange(space.size)
    inner = intermediate_membership(space, rows, rows, 0.5, small)
    outer = intermediate_membership(space, rows, rows, 0.5, large)
    assert np.all(outer[inner])


def test_intermediate_contains_a0_when_a0_meets_a1(path_space):
    both = Subset.of([1])
    assert 1 in intermediate_set(path_space, both, both, 0.3, 0.0)


def test_neighborhood_is_open(two_point_space):
    assert neighborhood(two_point_space, Subset.of([0]), 1.0).indices == (0,)
    assert neighborhood(two_point_space, Subset.of([0]), 1.0 + 1e-9).indices == (0, 1)
    with pytest.raises(NonpositiveR):
        neighborhood(two_point_space, Subset.of([0]), 0.0)


def test_set_distance_and_diameter(path_space, far_space):
    assert set_distance(path_space, Subset.of([0]), Subset.of([1, 2])) == 1.0
    assert diameter(path_space) == 2.0
    assert farthest_pair(far_space) == (0, 2)
    assert diameter(far_space) == 3.5


def test_pair_bitmasks(path_space):
    masks = IntermediateIndex(path_space, 0.5, 0.0).pair_bitmasks()
    assert masks[0, 2] == 0b010
    assert masks[1, 1] == 0b010
    assert masks[0, 1] == 0


@given(metric_spaces, st.data())
def test_neighborhood_monotone_and_contains_set(space, data):
    indices = st.lists(st.integers(0, space.size - 1), min_size=1, unique=True)
    inner = data.draw(indices)
    outer = Subset.of(set(inner) | set(data.draw(indices)))
    inner = Subset.of(inner)
    r = data.draw(st.floats(min_value=0.01, max_value=1.0))
    wider = r + data.draw(st.floats(min_value=0.0, max_value=1.0))
    grown = neighborhood(space, inner, r)
    assert inner.issubset(grown)
    assert grown.issubset(neighborhood(space, outer, r))
    assert grown.issubset(neighborhood(space, inner, wider))


@given(metric_spaces, st.floats(min_value=1.5, max_value=50.0), st.data())
def test_inf_coefficient_bounded_by_set_distance(space, n, data):
    indices = st.lists(st.integers(0, space.size - 1), min_size=1, unique=True)
    a0 = Subset.of(data.draw(indices))
    a1 = Subset.of(data.draw(indices))
    value, _ = inf_coefficient(space, a0, a1, 0.5, n)
    floor = distortion_coefficient(set_distance(space, a0, a1), 0.5, n)
    assert value >= floor * (1.0 - 1e-12)
