import numpy as np
import pytest
from hypothesis import given, settings

from epsbm.config import concentration_config
from epsbm.core.errors import EpsBMError, NonpositiveR, SpaceTooLarge
from epsbm.services.bounds import gaussian_bound
from epsbm.services.concentration import (
    alpha_exact,
    alpha_exact_search,
    alpha_greedy_search,
    alpha_lower_greedy,
    concentration_profile,
    estimate_alpha,
    evaluation_radius,
    greedy_half_mass_sets,
)

from .strategies import metric_spaces, random_metric_space


@pytest.mark.parametrize("r", [0.25, 0.5, 0.75, 1.0])
def test_two_point_alpha(two_point_space, r):
    assert alpha_exact(two_point_space, r) == 0.5
    assert alpha_lower_greedy(two_point_space, r) == 0.5


def test_path_alpha(path_space):
    estimate = alpha_exact_search(path_space, 0.5)
    assert estimate.value == 0.5
    assert estimate.exactness == "exact"
    assert estimate.witness in ([1], [0, 2])


def test_alpha_beyond_diameter_is_zero(path_space):
    assert alpha_exact(path_space, 2.5) == 0.0
    assert alpha_lower_greedy(path_space, 2.5) == 0.0


def test_exact_witness_smallest_mask(two_point_space):
    assert alpha_exact_search(two_point_space, 0.5).witness == [0]


def test_greedy_witness(two_point_space):
    estimate = alpha_greedy_search(two_point_space, 0.5)
    assert estimate.witness == [0]
    assert estimate.exactness == "lower_bound"


def test_greedy_half_mass_sets_carry_half(path_space):
    members = greedy_half_mass_sets(path_space)
    masses = members.astype(float) @ path_space.weights
    assert np.all(masses >= 0.5)
    # centered at b the ball {b} already carries half the mass
    assert members[1].tolist() == [False, True, False]


def test_alpha_errors(two_point_space):
    with pytest.raises(NonpositiveR):
        alpha_exact(two_point_space, 0.0)
    with pytest.raises(NonpositiveR):
        alpha_lower_greedy(two_point_space, -1.0)
    big = random_metric_space(1, concentration_config.exact_max_points + 1)
    with pytest.raises(SpaceTooLarge):
        alpha_exact(big, 0.5)


def test_greedy_never_exceeds_exact():
    for seed in range(200):
        size = 3 + seed % 10
        space = random_metric_space(seed, size)
        radii = np.linspace(0.05, space.max_distance * 1.1, 10)
        for r in radii:
            assert alpha_lower_greedy(space, r) <= alpha_exact(space, r) + 1e-12


@settings(max_examples=30, deadline=None)
@given(metric_spaces)
def test_exact_alpha_nonincreasing_and_at_most_half(space):
    radii = np.linspace(0.05, space.max_distance * 1.2, 12)
    values = [alpha_exact(space, r) for r in radii]
    assert all(0.0 <= v <= 0.5 + 1e-12 for v in values)
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    assert values[-1] == 0.0


def test_exact_independent_of_workers():
    space = random_metric_space(12, 12)
    config = concentration_config.model_copy(update={"exact_chunk_size": 16})
    one = alpha_exact_search(space, 0.4, config)
    four = alpha_exact_search(space, 0.4, config.model_copy(update={"workers": 4}))
    assert one == four


def test_evaluation_radius_shifts_breakpoints(path_space):
    assert evaluation_radius(path_space, 1.0) < 1.0
    assert evaluation_radius(path_space, 0.7) == 0.7
    estimate = estimate_alpha(path_space, 1.0, "exact")
    assert estimate.r == 1.0
    assert estimate.value == 0.5


def test_profile_two_point(two_point_space):
    profile = concentration_profile(two_point_space, [0.25, 0.5, 0.75], 2)
    assert profile.alpha_values == [0.5, 0.5, 0.5]
    assert profile.strategy == "exact"
    assert profile.exactness == ["exact"] * 3
    assert profile.space.size == 2
    assert profile.bound1_values == [gaussian_bound(2, r) for r in (0.25, 0.5, 0.75)]
    assert len(profile.witnesses) == 3


def test_profile_beyond_diameter_and_pi(path_space):
    profile = concentration_profile(path_space, [2.5, 3.5], 2, strategy="greedy")
    assert profile.alpha_values == [0.0, 0.0]
    assert profile.exactness == ["lower_bound", "lower_bound"]
    assert profile.bound2_values[0] is not None
    assert profile.bound2_values[1] is None


def test_profile_empty_grid(two_point_space):
    profile = concentration_profile(two_point_space, [], 2)
    assert profile.r_values == []
    assert profile.alpha_values == []


def test_profile_errors(two_point_space):
    with pytest.raises(EpsBMError):
        concentration_profile(two_point_space, [0.5, 0.25], 2)
    with pytest.raises(NonpositiveR):
        concentration_profile(two_point_space, [0.0, 0.5], 2)
