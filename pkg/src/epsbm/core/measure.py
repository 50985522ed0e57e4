"""Measure arithmetic on finite metric measure spaces."""

import math

import numpy as np

from .models import MetricMeasureSpace, Subset


def measure(space: MetricMeasureSpace, subset: Subset) -> float:
    """
    Return mu(A), the total weight of the members of a subset.

    Raises:
        IndexOutOfRange: If the subset is not a subset of the space
    """
    idx = space.indices_of(subset)
    return math.fsum(space.weights[idx])


def subset_mass_table(weights: np.ndarray) -> np.ndarray:
    """
    Masses of all 2**N subsets, indexed by bitmask.

    Built by doubling: entries with bit j set are the entries without it plus
    the weight of point j.
    """
    size = len(weights)
    table = np.zeros(1 << size, dtype=np.float64)
    for j in range(size):
        half = 1 << j
        table[half : 2 * half] = table[:half] + weights[j]
    return table
