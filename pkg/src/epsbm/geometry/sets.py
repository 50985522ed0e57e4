"""Neighborhoods, set distances, diameters and approximated intermediate sets."""

import numpy as np

from epsbm.core.errors import InvalidEps, NonpositiveR
from epsbm.core.models import MetricMeasureSpace, Subset

from .coefficients import check_tau


def check_eps(eps: float) -> None:
    if not eps >= 0.0:
        raise InvalidEps(f"eps must be >= 0, got {eps!r}")


def intermediate_rows(
    dist: np.ndarray, i: int, cols: np.ndarray, t: float, eps: float
) -> np.ndarray:
    """
    For a fixed x0 = i and each x1 in cols, mark every x satisfying both
    |d(x0,x) - t d(x0,x1)| <= eps and |d(x,x1) - (1-t) d(x0,x1)| <= eps.

    Returns:
        Boolean array of shape (len(cols), N)
    """
    d01 = dist[i, cols][:, None]
    near0 = np.abs(dist[i, :][None, :] - t * d01) <= eps
    near1 = np.abs(dist[cols, :] - (1.0 - t) * d01) <= eps
    return near0 & near1


def intermediate_membership(
    space: MetricMeasureSpace, rows: np.ndarray, cols: np.ndarray, t: float, eps: float
) -> np.ndarray:
    """Boolean membership of I_t^eps for index arrays of A0 and A1."""
    out = np.zeros(space.size, dtype=bool)
    for i in rows:
        out |= intermediate_rows(space.dist, int(i), cols, t, eps).any(axis=0)
    return out


def intermediate_set(
    space: MetricMeasureSpace, a0: Subset, a1: Subset, t: float, eps: float
) -> Subset:
    """
    The eps-approximated t-intermediate points between A0 and A1.

    Scans every (x, x0, x1) triple; both conditions are non-strict and are
    compared without tolerance.

    Raises:
        EmptySubset: If A0 or A1 is empty
        InvalidTau: If t is not in (0, 1)
        InvalidEps: If eps < 0
    """
    check_tau(t)
    check_eps(eps)
    rows = space.indices_of(a0, nonempty=True)
    cols = space.indices_of(a1, nonempty=True)
    return Subset.from_bool(intermediate_membership(space, rows, cols, t, eps))


def ball_matrix(space: MetricMeasureSpace, r: float) -> np.ndarray:
    """Open balls as rows: entry (a, x) is True when d(a, x) < r."""
    if not r > 0.0:
        raise NonpositiveR(f"r must be > 0, got {r!r}")
    return space.dist < r


def neighborhood_membership(
    space: MetricMeasureSpace, members: np.ndarray, r: float
) -> np.ndarray:
    """Boolean membership of A_r for an index array of A."""
    return ball_matrix(space, r)[members].any(axis=0)


def neighborhood(space: MetricMeasureSpace, subset: Subset, r: float) -> Subset:
    """
    The open r-neighborhood A_r = {x : d(x, A) < r}.

    Raises:
        EmptySubset: If A is empty
        NonpositiveR: If r <= 0
    """
    members = space.indices_of(subset, nonempty=True)
    return Subset.from_bool(neighborhood_membership(space, members, r))


def set_distance(space: MetricMeasureSpace, a: Subset, b: Subset) -> float:
    """Smallest distance between a point of A and a point of B."""
    rows = space.indices_of(a, nonempty=True)
    cols = space.indices_of(b, nonempty=True)
    return float(space.dist[np.ix_(rows, cols)].min())


def farthest_pair(space: MetricMeasureSpace) -> tuple[int, int]:
    """Lexicographically smallest pair (i, j), i <= j, realizing the diameter."""
    k = int(np.argmax(space.dist))
    i, j = divmod(k, space.size)
    return (min(i, j), max(i, j))


def diameter(space: MetricMeasureSpace) -> float:
    """Largest pairwise distance; 0 for a one-point space."""
    return space.max_distance
