"""Volume distortion coefficients of the approximated Brunn-Minkowski inequality."""

import math

import numpy as np

from epsbm.core.errors import EpsBMError, InvalidN, InvalidTau
from epsbm.core.models import MetricMeasureSpace, Subset


def check_tau(tau: float) -> None:
    if not (0.0 < tau < 1.0):
        raise InvalidTau(f"tau must lie in (0, 1), got {tau!r}")


def check_n(n: float) -> None:
    if not (n > 1.0 and math.isfinite(n)):
        raise InvalidN(f"n must lie in (1, inf), got {n!r}")


def distortion_coefficients(d: np.ndarray, tau: float, n: float) -> np.ndarray:
    """
    Elementwise (sin(tau d) / (tau sin d))**((n-1)/n) over an array of distances.

    Distances >= pi map to +inf and 0 maps to 1 (the continuous extension).
    The ratio is evaluated in log space so that the blow-up near pi does not
    overflow before the exponent is applied.

    Args:
        d: Nonnegative distances
        tau: Interpolation parameter in (0, 1)
        n: Dimension parameter in (1, inf)

    Returns:
        Array of coefficients with the shape of d

    Raises:
        InvalidTau: If tau is not in (0, 1)
        InvalidN: If n is not in (1, inf)
    """
    check_tau(tau)
    check_n(n)
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0.0):
        raise EpsBMError("distances must be nonnegative")

    inside = (d > 0.0) & (d < math.pi)
    safe = np.where(inside, d, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.log(np.sin(tau * safe)) - math.log(tau) - np.log(np.sin(safe))
        values = np.exp(((n - 1.0) / n) * log_ratio)
    out = np.where(inside, values, 1.0)
    return np.where(d >= math.pi, math.inf, out)


def distortion_coefficient(d: float, tau: float, n: float) -> float:
    """Scalar form of ``distortion_coefficients``."""
    return float(distortion_coefficients(np.asarray(d), tau, n))


def inf_coefficient(
    space: MetricMeasureSpace, a0: Subset, a1: Subset, tau: float, n: float
) -> tuple[float, tuple[int, int]]:
    """
    Infimum of the distortion coefficient over A0 x A1 with an attaining pair.

    Ties go to the lexicographically smallest pair. When every pair is at
    distance >= pi the value is +inf.

    Raises:
        EmptySubset: If A0 or A1 is empty
    """
    rows = space.indices_of(a0, nonempty=True)
    cols = space.indices_of(a1, nonempty=True)
    block = distortion_coefficients(space.dist[np.ix_(rows, cols)], tau, n)
    k = int(np.argmin(block))
    i, j = divmod(k, len(cols))
    return float(block.flat[k]), (int(rows[i]), int(cols[j]))
