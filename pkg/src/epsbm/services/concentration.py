"""Concentration function of finite metric measure spaces."""

import logging
import math
from functools import partial
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel

from epsbm.config.settings import ConcentrationConfig, concentration_config
from epsbm.core.errors import EpsBMError, NonpositiveR, SpaceTooLarge
from epsbm.core.measure import subset_mass_table
from epsbm.core.models import MetricMeasureSpace, Subset
from epsbm.geometry.coefficients import check_n
from epsbm.utils.parallel import chunk_ranges, ordered_map

from .bounds import gaussian_bound, improved_bound

logger = logging.getLogger(__name__)

# Absorbs summation-order rounding in mu(A) >= 1/2 so that every code path
# (subset tables, cumulative sums) agrees on which sets are half-mass.
HALF_MASS = 0.5 - 1e-12

Exactness = Literal["exact", "lower_bound"]
Strategy = Literal["exact", "greedy", "auto"]


class AlphaEstimate(BaseModel):
    """A value of 1 - mu(A_r) with the half-mass set A that attains it."""

    r: float
    value: float
    witness: list[int]
    exactness: Exactness


class SpaceDescriptor(BaseModel):
    """Summary of the space a result was computed on."""

    size: int
    diameter: float


class ConcentrationProfile(BaseModel):
    """Sampled concentration function alongside both bound curves."""

    n: float
    strategy: Strategy
    space: SpaceDescriptor
    r_values: list[float]
    alpha_values: list[float]
    exactness: list[Exactness]
    witnesses: list[list[int]] = []
    bound1_values: list[float]
    bound2_values: list[Optional[float]]


def _check_r(r: float) -> None:
    if not r > 0.0:
        raise NonpositiveR(f"r must be > 0, got {r!r}")


def _ball_bitmasks(space: MetricMeasureSpace, r: float) -> np.ndarray:
    """Open r-ball around each point as an int64 bitmask."""
    powers = np.int64(1) << np.arange(space.size, dtype=np.int64)
    return (space.dist < r).astype(np.int64) @ powers


def _minimal_half_mass_sets(mass: np.ndarray, size: int) -> np.ndarray:
    """
    Bitmasks of the half-mass sets none of whose one-point removals is
    half-mass. Dropping points from A can only shrink A_r, so 1 - mu(A_r) is
    largest on these.
    """
    feasible = mass >= HALF_MASS
    masks = np.arange(len(mass), dtype=np.int64)
    reducible = np.zeros(len(mass), dtype=bool)
    for j in range(size):
        bit = np.int64(1) << j
        reducible |= ((masks & bit) != 0) & feasible[masks ^ bit]
    return np.flatnonzero(feasible & ~reducible)


def _best_in_chunk(
    candidates: np.ndarray, balls: np.ndarray, mass: np.ndarray, full: int
) -> tuple[float, int]:
    reach = np.zeros(len(candidates), dtype=np.int64)
    for j, ball in enumerate(balls):
        reach |= np.where(((candidates >> j) & 1) == 1, ball, 0)
    outside = mass[full ^ reach]
    k = int(np.argmax(outside))
    return float(outside[k]), int(candidates[k])


def alpha_exact_search(
    space: MetricMeasureSpace, r: float, config: Optional[ConcentrationConfig] = None
) -> AlphaEstimate:
    """
    Maximize 1 - mu(A_r) over every A with mu(A) >= 1/2.

    Args:
        space: Validated space with at most exact_max_points points
        r: Radius > 0
        config: Concentration config; defaults to the global one

    Returns:
        AlphaEstimate with the attaining set (smallest bitmask among ties)

    Raises:
        SpaceTooLarge: If the space is too large to enumerate
        NonpositiveR: If r <= 0
    """
    config = config or concentration_config
    _check_r(r)
    size = space.size
    if size > config.exact_max_points:
        raise SpaceTooLarge(
            f"exact concentration is limited to {config.exact_max_points} points, "
            f"space has {size}"
        )
    mass = subset_mass_table(space.weights)
    full = (1 << size) - 1
    candidates = _minimal_half_mass_sets(mass, size)
    balls = _ball_bitmasks(space, r)
    logger.debug("r=%r: %d minimal half-mass sets", r, len(candidates))

    chunks = chunk_ranges(len(candidates), config.exact_chunk_size)
    parts = ordered_map(
        partial(_best_in_chunk, balls=balls, mass=mass, full=full),
        [candidates[a:b] for a, b in chunks],
        config.workers,
    )
    value, mask = min(parts, key=lambda p: (-p[0], p[1]))
    return AlphaEstimate(
        r=r,
        value=value,
        witness=list(Subset.from_mask(mask).indices),
        exactness="exact",
    )


def alpha_exact(
    space: MetricMeasureSpace, r: float, config: Optional[ConcentrationConfig] = None
) -> float:
    """Concentration function alpha(r) by full subset enumeration."""
    return alpha_exact_search(space, r, config).value


def greedy_half_mass_sets(space: MetricMeasureSpace) -> np.ndarray:
    """
    For each center i, the smallest closed ball around i of mass >= 1/2
    (points ordered by distance to i, ties by index), as boolean rows.
    """
    size = space.size
    ties = np.broadcast_to(np.arange(size), space.dist.shape)
    order = np.lexsort((ties, space.dist), axis=-1)
    cumulative = np.cumsum(space.weights[order], axis=1)
    last = np.argmax(cumulative >= HALF_MASS, axis=1)
    taken = np.arange(size)[None, :] <= last[:, None]
    members = np.zeros((size, size), dtype=bool)
    np.put_along_axis(members, order, taken, axis=1)
    return members


def alpha_greedy_search(space: MetricMeasureSpace, r: float) -> AlphaEstimate:
    """
    Lower bound on alpha(r): the best of the N greedy half-mass balls.

    Raises:
        NonpositiveR: If r <= 0
    """
    _check_r(r)
    members = greedy_half_mass_sets(space)
    near = (space.dist < r).astype(np.float64)
    reached = (members.astype(np.float64) @ near) > 0.0
    outside = (~reached).astype(np.float64) @ space.weights
    k = int(np.argmax(outside))
    return AlphaEstimate(
        r=r,
        value=float(outside[k]),
        witness=[int(i) for i in np.flatnonzero(members[k])],
        exactness="lower_bound",
    )


def alpha_lower_greedy(space: MetricMeasureSpace, r: float) -> float:
    """Greedy lower bound on the concentration function alpha(r)."""
    return alpha_greedy_search(space, r).value


def evaluation_radius(
    space: MetricMeasureSpace, r: float, config: Optional[ConcentrationConfig] = None
) -> float:
    """
    Shift r slightly down when it coincides with a stored distance, so that
    the strict inequality in A_r is not decided by a floating-point tie.
    """
    config = config or concentration_config
    if np.any(space.dist == r):
        return r - config.breakpoint_rel_shift * space.max_distance
    return r


def resolve_strategy(
    space: MetricMeasureSpace,
    strategy: Strategy,
    config: Optional[ConcentrationConfig] = None,
) -> Literal["exact", "greedy"]:
    config = config or concentration_config
    if strategy == "auto":
        return "exact" if space.size <= config.exact_max_points else "greedy"
    return strategy


def estimate_alpha(
    space: MetricMeasureSpace,
    r: float,
    strategy: Strategy = "auto",
    config: Optional[ConcentrationConfig] = None,
) -> AlphaEstimate:
    """alpha(r) by the chosen strategy, evaluated off the distance breakpoints."""
    config = config or concentration_config
    r_eval = evaluation_radius(space, r, config)
    if resolve_strategy(space, strategy, config) == "exact":
        estimate = alpha_exact_search(space, r_eval, config)
    else:
        estimate = alpha_greedy_search(space, r_eval)
    return estimate.model_copy(update={"r": r})


def concentration_profile(
    space: MetricMeasureSpace,
    r_values: list[float],
    n: float,
    strategy: Strategy = "auto",
    config: Optional[ConcentrationConfig] = None,
) -> ConcentrationProfile:
    """
    Sample alpha(r) on a grid together with both bound curves.

    Args:
        space: Validated space
        r_values: Strictly increasing positive radii (may be empty)
        n: Dimension parameter of the bounds
        strategy: "exact", "greedy", or "auto" (exact iff N <= exact_max_points)
        config: Concentration config; defaults to the global one

    Returns:
        ConcentrationProfile; bound2 is None where r >= pi

    Raises:
        NonpositiveR: If a radius is <= 0
        InvalidN: If n is not in (1, inf)
    """
    config = config or concentration_config
    check_n(n)
    for r in r_values:
        _check_r(r)
    if any(b <= a for a, b in zip(r_values, r_values[1:], strict=False)):
        raise EpsBMError("r_values must be strictly increasing")

    estimates = [estimate_alpha(space, r, strategy, config) for r in r_values]
    return ConcentrationProfile(
        n=n,
        strategy=resolve_strategy(space, strategy, config),
        space=SpaceDescriptor(size=space.size, diameter=space.max_distance),
        r_values=list(r_values),
        alpha_values=[e.value for e in estimates],
        exactness=[e.exactness for e in estimates],
        witnesses=[e.witness for e in estimates],
        bound1_values=[gaussian_bound(n, r) for r in r_values],
        bound2_values=[improved_bound(n, r) if r < math.pi else None for r in r_values],
    )
