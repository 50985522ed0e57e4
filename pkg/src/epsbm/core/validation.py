"""Validation of candidate metric measure space data."""

import logging
import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from epsbm.config.settings import ValidationConfig, validation_config

from .errors import SpaceValidationError, Violation
from .models import MetricMeasureSpace

logger = logging.getLogger(__name__)

SUM_ULPS = 4


class RawSpace(BaseModel):
    """Unvalidated space data as read from a file or built by a caller."""

    labels: Optional[list[str]] = None
    dist: list[list[float]]
    weights: list[float]


def validate_space(
    raw: RawSpace | MetricMeasureSpace | dict[str, Any],
    config: Optional[ValidationConfig] = None,
) -> MetricMeasureSpace:
    """
    Validate candidate space data and normalize its weights.

    Every invariant is checked and all violations are collected before
    raising, so a caller sees the full list at once.

    Args:
        raw: Candidate data (a RawSpace, a dict with the same keys, or an
            already validated space, which is returned unchanged)
        config: Tolerances; defaults to the global validation config

    Returns:
        Validated space whose weights sum to 1

    Raises:
        SpaceValidationError: If any invariant is violated
    """
    if isinstance(raw, MetricMeasureSpace):
        return raw
    if isinstance(raw, dict):
        raw = RawSpace.model_validate(raw)
    config = config or validation_config

    dist = np.asarray(raw.dist, dtype=np.float64)
    weights = np.asarray(raw.weights, dtype=np.float64)
    size = len(weights)
    labels = raw.labels if raw.labels is not None else [f"x{i}" for i in range(size)]

    shape_errors = _check_shapes(dist, weights, labels)
    if shape_errors:
        raise SpaceValidationError(shape_errors)

    violations: list[Violation] = []
    violations += _check_labels(labels)
    if not (np.all(np.isfinite(dist)) and np.all(np.isfinite(weights))):
        violations.append(
            Violation(
                kind="NonfiniteValue",
                message="distances and weights must be finite",
            )
        )
        raise SpaceValidationError(violations)
    violations += _check_matrix(dist, config)
    violations += _check_weights(weights, config)
    if violations:
        logger.debug("space rejected with %d violation(s)", len(violations))
        raise SpaceValidationError(violations)

    dist = dist.copy()
    dist.setflags(write=False)
    normalized = normalize_weights(weights)
    normalized.setflags(write=False)
    return MetricMeasureSpace(labels=tuple(labels), dist=dist, weights=normalized)


def normalize_weights(weights: np.ndarray) -> np.ndarray:
    """
    Rescale positive weights to sum to 1.

    Weights whose exact sum is already 1 up to a few ulps are returned as a
    copy, so validating an emitted space file reproduces it bit for bit. The
    rounding residual of the rescale is folded into the largest weight.
    """
    total = math.fsum(weights)
    if abs(total - 1.0) <= SUM_ULPS * np.finfo(np.float64).eps:
        return weights.copy()
    out = weights / total
    out[int(np.argmax(out))] += 1.0 - math.fsum(out)
    return out


def _check_shapes(
    dist: np.ndarray, weights: np.ndarray, labels: list[str]
) -> list[Violation]:
    size = len(weights)
    errors = []
    if size == 0:
        errors.append(Violation(kind="ShapeMismatch", message="space has no points"))
    if dist.ndim != 2 or dist.shape != (size, size):
        errors.append(
            Violation(
                kind="ShapeMismatch",
                message=f"distance matrix shape {dist.shape} != ({size}, {size})",
            )
        )
    if len(labels) != size:
        errors.append(
            Violation(
                kind="ShapeMismatch",
                message=f"{len(labels)} labels for {size} weights",
            )
        )
    return errors


def _check_labels(labels: list[str]) -> list[Violation]:
    seen: dict[str, int] = {}
    errors = []
    for i, label in enumerate(labels):
        if label in seen:
            errors.append(
                Violation(
                    kind="DuplicateLabel",
                    indices=[seen[label], i],
                    message=f"label {label!r} repeated",
                )
            )
        else:
            seen[label] = i
    return errors


def _check_matrix(dist: np.ndarray, config: ValidationConfig) -> list[Violation]:
    errors = []
    size = dist.shape[0]
    upper = np.triu_indices(size, k=1)

    asym = np.flatnonzero(dist[upper] != dist.T[upper])
    for k in asym:
        i, j = int(upper[0][k]), int(upper[1][k])
        errors.append(
            Violation(
                kind="AsymmetricMatrix",
                indices=[i, j],
                message=f"d({i},{j})={dist[i, j]!r} != d({j},{i})={dist[j, i]!r}",
            )
        )

    for i in np.flatnonzero(np.diag(dist) != 0.0):
        errors.append(
            Violation(
                kind="NonzeroDiagonal",
                indices=[int(i)],
                message=f"d({i},{i})={dist[i, i]!r}",
            )
        )

    for k in np.flatnonzero(dist[upper] < 0.0):
        i, j = int(upper[0][k]), int(upper[1][k])
        errors.append(
            Violation(
                kind="NegativeDistance",
                indices=[i, j],
                message=f"d({i},{j})={dist[i, j]!r} is negative",
            )
        )

    for k in np.flatnonzero(dist[upper] == 0.0):
        i, j = int(upper[0][k]), int(upper[1][k])
        errors.append(
            Violation(
                kind="DuplicatePoint",
                indices=[i, j],
                message=f"distinct points {i} and {j} at distance {dist[i, j]!r}",
            )
        )

    errors += _check_triangles(dist, config)
    return errors


def _check_triangles(dist: np.ndarray, config: ValidationConfig) -> list[Violation]:
    errors = []
    size = dist.shape[0]
    tol = config.triangle_rel_tol * (float(dist.max()) if size > 1 else 0.0)
    for j in range(size):
        bound = dist[:, j][:, None] + dist[j, :][None, :] + tol
        bad = np.argwhere(np.triu(dist > bound, k=1))
        for i, k in bad:
            i, k = int(i), int(k)
            if j in (i, k):
                continue
            errors.append(
                Violation(
                    kind="TriangleViolation",
                    indices=[i, j, k],
                    message=(
                        f"d({i},{k})={dist[i, k]!r} > d({i},{j}) + d({j},{k})"
                        f" = {dist[i, j] + dist[j, k]!r}"
                    ),
                )
            )
    errors.sort(key=lambda v: v.indices)
    return errors


def _check_weights(weights: np.ndarray, config: ValidationConfig) -> list[Violation]:
    errors = []
    for i in np.flatnonzero(weights <= 0.0):
        errors.append(
            Violation(
                kind="NonpositiveWeight",
                indices=[int(i)],
                message=f"weight {i} is {weights[i]!r}; full support needs > 0",
            )
        )
    total = math.fsum(weights)
    if abs(total - 1.0) > config.weight_sum_tol:
        errors.append(
            Violation(kind="WeightSumOff", message=f"weights sum to {total!r}, not 1")
        )
    return errors
