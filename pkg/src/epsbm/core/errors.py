"""Domain errors raised across epsbm."""

from typing import Literal

from pydantic import BaseModel, Field

ViolationKind = Literal[
    "ShapeMismatch",
    "NonfiniteValue",
    "AsymmetricMatrix",
    "NonzeroDiagonal",
    "NegativeDistance",
    "DuplicatePoint",
    "TriangleViolation",
    "NonpositiveWeight",
    "WeightSumOff",
    "DuplicateLabel",
]


class Violation(BaseModel):
    """One invariant violation found while validating a space."""

    kind: ViolationKind
    indices: list[int] = Field(default_factory=list)
    message: str


class EpsBMError(ValueError):
    """Base class for all epsbm input and domain errors."""


class SpaceValidationError(EpsBMError):
    """Raised when candidate space data breaks one or more invariants."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        kinds = sorted({v.kind for v in violations})
        super().__init__(
            f"{len(violations)} invariant violation(s): {', '.join(kinds)}"
        )


class IndexOutOfRange(EpsBMError):
    """Raised when a subset refers to a point outside the space."""


class EmptySubset(EpsBMError):
    """Raised when an operation needs a nonempty subset."""


class InvalidTau(EpsBMError):
    """Raised when an interpolation parameter lies outside (0, 1)."""


class InvalidN(EpsBMError):
    """Raised when the dimension parameter n is not in (1, inf)."""


class InvalidEps(EpsBMError):
    """Raised when the approximation slack is negative."""


class NonpositiveR(EpsBMError):
    """Raised when a neighborhood radius is not positive."""


class ROutOfRange(EpsBMError):
    """Raised when a radius falls outside (0, pi) where a bound needs it."""


class SpaceTooLarge(EpsBMError):
    """Raised when an exhaustive enumeration is refused for a large space."""


class EmptyTGrid(EpsBMError):
    """Raised when no interpolation parameters are given."""


class UnknownSampler(EpsBMError):
    """Raised for an unrecognized subset sampler name."""


class InvalidPairCount(EpsBMError):
    """Raised when a sampled verification asks for no pairs."""


class UnsupportedDimensionForMethod(EpsBMError):
    """Raised when a sphere sampling method does not support the dimension."""


class InvalidCount(EpsBMError):
    """Raised when a point count or center count is out of range."""


class EmptyCell(EpsBMError):
    """Raised when a Voronoi cell receives no Monte Carlo sample."""


class BadSampleBudget(EpsBMError):
    """Raised when too few Monte Carlo samples are requested per center."""


class SpaceFileSyntaxError(EpsBMError):
    """Raised when a space file does not follow the mms-1 layout."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnsupportedFormat(EpsBMError):
    """Raised when a report cannot be emitted in the requested format."""


class ChainViolation(EpsBMError):
    """Raised when the Gaussian-bound majorization chain fails numerically."""
