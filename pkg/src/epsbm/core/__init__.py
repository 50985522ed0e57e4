"""Finite metric measure spaces: models, validation and measure."""

from .errors import EpsBMError, SpaceValidationError, Violation
from .measure import measure, subset_mass_table
from .models import ExtendedReal, MetricMeasureSpace, Subset
from .validation import RawSpace, normalize_weights, validate_space

__all__ = [
    "EpsBMError",
    "ExtendedReal",
    "MetricMeasureSpace",
    "RawSpace",
    "SpaceValidationError",
    "Subset",
    "Violation",
    "measure",
    "normalize_weights",
    "subset_mass_table",
    "validate_space",
]
