"""Closed-form concentration bounds from the approximated Brunn-Minkowski inequality."""

import math
from typing import Optional

from pydantic import BaseModel

from epsbm.core.errors import ChainViolation, ROutOfRange
from epsbm.geometry.coefficients import check_n

CHAIN_TOL = 1e-12


def _check_r_open(r: float) -> None:
    if not (0.0 < r < math.pi):
        raise ROutOfRange(f"r must lie in (0, pi), got {r!r}")


def gaussian_bound(n: float, r: float) -> float:
    """
    2 exp(-(n-1) r^2 / pi^2), the Gaussian bound on the concentration function.

    Raises:
        InvalidN: If n is not in (1, inf)
        ROutOfRange: If r < 0
    """
    check_n(n)
    if not r >= 0.0:
        raise ROutOfRange(f"r must be >= 0, got {r!r}")
    return 2.0 * math.exp(-(n - 1.0) * r * r / math.pi**2)


def improved_bound(n: float, r: float) -> float:
    """
    exp(-n [1 + 2^(-1/n) - 2 cos(r/2)^((n-1)/n)]), the sharper bound obtained
    without the arithmetic-geometric mean step. Only meaningful for r in
    (0, pi); near r = 0 it exceeds 1 and says nothing.

    Raises:
        InvalidN: If n is not in (1, inf)
        ROutOfRange: If r is not in (0, pi)
    """
    check_n(n)
    _check_r_open(r)
    bracket = 1.0 + 2.0 ** (-1.0 / n) - 2.0 * math.cos(r / 2.0) ** ((n - 1.0) / n)
    return math.exp(-n * bracket)


def theorem_chain_check(n: float, r: float) -> tuple[float, float, float]:
    """
    Evaluate the majorization chain closing the Gaussian bound proof,

        2 cos(r/2)^(2(n-1)) <= 2 (1 - r^2/(2 pi^2))^(2(n-1)) <= 2 exp(-(n-1) r^2/pi^2),

    and check both inequalities to within CHAIN_TOL.

    Returns:
        The three chain values in order

    Raises:
        ROutOfRange: If r is not in (0, pi)
        InvalidN: If n is not in (1, inf)
        ChainViolation: If an inequality fails
    """
    check_n(n)
    _check_r_open(r)
    power = 2.0 * (n - 1.0)
    first = 2.0 * math.cos(r / 2.0) ** power
    second = 2.0 * (1.0 - r * r / (2.0 * math.pi**2)) ** power
    third = 2.0 * math.exp(-(n - 1.0) * r * r / math.pi**2)
    if first > second + CHAIN_TOL or second > third + CHAIN_TOL:
        raise ChainViolation(
            f"chain fails at n={n!r}, r={r!r}: {first!r}, {second!r}, {third!r}"
        )
    return first, second, third


class BoundRow(BaseModel):
    """Bound values at one radius."""

    r: float
    gaussian: float
    improved: Optional[float] = None
    chain: Optional[tuple[float, float, float]] = None


class BoundsTable(BaseModel):
    """Bound curves over a radius grid."""

    n: float
    rows: list[BoundRow]


def bounds_table(n: float, r_values: list[float]) -> BoundsTable:
    """Gaussian bound, improved bound and chain values over a grid of radii."""
    check_n(n)
    rows = []
    for r in r_values:
        inside = 0.0 < r < math.pi
        rows.append(
            BoundRow(
                r=r,
                gaussian=gaussian_bound(n, r),
                improved=improved_bound(n, r) if inside else None,
                chain=theorem_chain_check(n, r) if inside else None,
            )
        )
    return BoundsTable(n=n, rows=rows)
