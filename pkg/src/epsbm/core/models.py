"""Pydantic models for finite metric measure spaces and their subsets."""

import math
from typing import Annotated, Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, PlainSerializer, field_validator

from .errors import EmptySubset, EpsBMError, IndexOutOfRange


def _encode_extended(value: float) -> float | str:
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return value


# A float that may be +inf (distortion coefficients, right-hand sides) or -inf
# (gaps). JSON carries infinities as strings so reports stay strict JSON.
ExtendedReal = Annotated[
    float, PlainSerializer(_encode_extended, return_type=float | str, when_used="json")
]


class Subset(BaseModel):
    """
    Finite set of point indices of a metric measure space.

    Indices are stored sorted and unique. Whether they fall inside a given
    space is checked by ``MetricMeasureSpace.indices_of``.
    """

    model_config = ConfigDict(frozen=True)

    indices: tuple[int, ...]

    @field_validator("indices")
    @classmethod
    def _sorted_unique(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(i < 0 for i in value):
            raise ValueError("subset indices must be nonnegative")
        ordered = tuple(sorted(value))
        if len(set(ordered)) != len(ordered):
            raise ValueError("subset indices must not repeat")
        return ordered

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Subset":
        """
        Build a subset from any iterable of distinct nonnegative indices.

        Raises:
            IndexOutOfRange: If an index is negative
            EpsBMError: If an index repeats
        """
        values = tuple(int(i) for i in indices)
        negative = [i for i in values if i < 0]
        if negative:
            raise IndexOutOfRange(f"subset indices must be nonnegative, got {negative}")
        if len(set(values)) != len(values):
            raise EpsBMError(f"subset indices must not repeat, got {list(values)}")
        return cls(indices=values)

    @classmethod
    def from_mask(cls, mask: int) -> "Subset":
        """Build a subset from a bitmask (bit i set means index i is a member)."""
        indices = []
        i = 0
        while mask:
            if mask & 1:
                indices.append(i)
            mask >>= 1
            i += 1
        return cls(indices=tuple(indices))

    @classmethod
    def from_bool(cls, membership: np.ndarray) -> "Subset":
        """Build a subset from a boolean membership vector."""
        return cls(indices=tuple(int(i) for i in np.flatnonzero(membership)))

    @property
    def mask(self) -> int:
        """Bitmask with bit i set for every member i."""
        out = 0
        for i in self.indices:
            out |= 1 << i
        return out

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in self.indices

    def is_empty(self) -> bool:
        return not self.indices

    def issubset(self, other: "Subset") -> bool:
        return set(self.indices) <= set(other.indices)


class MetricMeasureSpace(BaseModel):
    """
    A finite metric measure space (X, d, mu).

    Built by ``epsbm.core.validation.validate_space``; the distance matrix and
    the weights are read-only arrays, so instances can be shared freely across
    workers.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    labels: tuple[str, ...]
    dist: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def max_distance(self) -> float:
        return float(self.dist.max()) if self.size > 1 else 0.0

    def full(self) -> Subset:
        """The whole point set as a subset."""
        return Subset(indices=tuple(range(self.size)))

    def indices_of(self, subset: Subset, *, nonempty: bool = False) -> np.ndarray:
        """
        Return the member indices of a subset as an integer array.

        Args:
            subset: Subset to check against this space
            nonempty: Raise EmptySubset if the subset has no members

        Returns:
            Sorted int64 index array

        Raises:
            IndexOutOfRange: If an index is not a point of this space
            EmptySubset: If nonempty is set and the subset is empty
        """
        if subset.indices and subset.indices[-1] >= self.size:
            raise IndexOutOfRange(
                f"index {subset.indices[-1]} outside space of size {self.size}"
            )
        if nonempty and not subset.indices:
            raise EmptySubset("operation needs a nonempty subset")
        return np.asarray(subset.indices, dtype=np.int64)

    def membership(self, subset: Subset) -> np.ndarray:
        """Boolean membership vector of a subset."""
        out = np.zeros(self.size, dtype=bool)
        out[self.indices_of(subset)] = True
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricMeasureSpace):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.dist, other.dist)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.dist.tobytes(), self.weights.tobytes()))
