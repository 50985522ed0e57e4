"""Random subset-pair samplers for sampled verification."""

from typing import Callable, Literal, Optional

import numpy as np

from epsbm.config.settings import VerifierConfig, verifier_config
from epsbm.core.errors import UnknownSampler
from epsbm.core.models import MetricMeasureSpace

SamplerName = Literal["singletons", "balls", "random"]

# Draws one (A0, A1) pair as sorted index arrays.
PairSampler = Callable[[np.random.Generator], tuple[np.ndarray, np.ndarray]]


def singleton_sampler(space: MetricMeasureSpace, config: VerifierConfig) -> PairSampler:
    """Pairs of singletons; the two points differ whenever N >= 2."""
    size = space.size

    def draw(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        i = int(rng.integers(size))
        if size == 1:
            return np.array([i]), np.array([i])
        j = int(rng.integers(size - 1))
        if j >= i:
            j += 1
        return np.array([i]), np.array([j])

    return draw


def ball_sampler(space: MetricMeasureSpace, config: VerifierConfig) -> PairSampler:
    """Pairs of closed metric balls with uniform centers and uniform radii."""
    radius_max = config.ball_radius_fraction * space.max_distance

    def ball(rng: np.random.Generator) -> np.ndarray:
        center = int(rng.integers(space.size))
        radius = rng.uniform(0.0, radius_max)
        return np.flatnonzero(space.dist[center] <= radius)

    def draw(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        a0 = ball(rng)
        return a0, ball(rng)

    return draw


def random_subset_sampler(
    space: MetricMeasureSpace, config: VerifierConfig
) -> PairSampler:
    """Pairs of uniform random subsets with a uniform size in [1, max_size]."""
    max_size = min(space.size, config.random_subset_max_size)

    def subset(rng: np.random.Generator) -> np.ndarray:
        k = int(rng.integers(1, max_size + 1))
        return np.sort(rng.choice(space.size, size=k, replace=False))

    def draw(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        a0 = subset(rng)
        return a0, subset(rng)

    return draw


SAMPLERS: dict[str, Callable[[MetricMeasureSpace, VerifierConfig], PairSampler]] = {
    "singletons": singleton_sampler,
    "balls": ball_sampler,
    "random": random_subset_sampler,
}


def get_sampler(
    name: str, space: MetricMeasureSpace, config: Optional[VerifierConfig] = None
) -> PairSampler:
    """
    Look up a sampler by name and bind it to a space.

    Raises:
        UnknownSampler: If the name is not one of SAMPLERS
    """
    try:
        factory = SAMPLERS[name]
    except KeyError:
        raise UnknownSampler(
            f"unknown sampler {name!r}; choose from {', '.join(SAMPLERS)}"
        ) from None
    return factory(space, config or verifier_config)
