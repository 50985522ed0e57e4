"""Distortion coefficients and set operations on finite metric measure spaces."""

from .coefficients import (
    distortion_coefficient,
    distortion_coefficients,
    inf_coefficient,
)
from .intermediate_index import IntermediateIndex
from .sets import (
    diameter,
    farthest_pair,
    intermediate_set,
    neighborhood,
    set_distance,
)

__all__ = [
    "IntermediateIndex",
    "diameter",
    "distortion_coefficient",
    "distortion_coefficients",
    "farthest_pair",
    "inf_coefficient",
    "intermediate_set",
    "neighborhood",
    "set_distance",
]
