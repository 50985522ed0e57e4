"""Evaluation and verification of the approximated Brunn-Minkowski inequality."""

import logging
import math
from functools import partial
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel

from epsbm.config.settings import VerifierConfig, verifier_config
from epsbm.core.errors import EmptyTGrid, InvalidPairCount, SpaceTooLarge
from epsbm.core.measure import subset_mass_table
from epsbm.core.models import ExtendedReal, MetricMeasureSpace, Subset
from epsbm.geometry.coefficients import (
    check_n,
    check_tau,
    distortion_coefficients,
    inf_coefficient,
)
from epsbm.geometry.intermediate_index import IntermediateIndex
from epsbm.geometry.sets import check_eps, farthest_pair, intermediate_membership
from epsbm.utils.parallel import chunk_ranges, ordered_map

from .samplers import get_sampler

logger = logging.getLogger(__name__)


class BMParams(BaseModel):
    """Parameters (eps, n, t) of one instance of the inequality."""

    eps: float
    n: float
    t: float = 0.5

    def __init__(self, **data):
        super().__init__(**data)
        check_eps(self.eps)
        check_n(self.n)
        check_tau(self.t)

    def at(self, t: float) -> "BMParams":
        """Same eps and n at another t."""
        return BMParams(eps=self.eps, n=self.n, t=t)


class BMCheckResult(BaseModel):
    """Both sides of one instance of the inequality, with witnesses."""

    a0: list[int]
    a1: list[int]
    t: float
    lhs: float
    rhs: ExtendedReal
    gap: ExtendedReal
    mc_slack: float = 0.0
    satisfied: bool
    mass0: float
    mass1: float
    intermediate_mass: float
    intermediate_size: int
    coeff0: ExtendedReal
    witness0: tuple[int, int]
    coeff1: ExtendedReal
    witness1: tuple[int, int]


class StrategyDescriptor(BaseModel):
    """How the checked instances were chosen."""

    kind: Literal["exhaustive", "sampled"]
    sampler: Optional[str] = None
    seed: Optional[int] = None
    pair_count: Optional[int] = None


class LemmaWitness(BaseModel):
    """A pair of points farther apart than pi."""

    i: int
    j: int
    distance: float


class BMVerifyReport(BaseModel):
    """Outcome of checking many instances of the inequality."""

    eps: float
    n: float
    t_values: list[float]
    tol_report: float
    mc_samples: Optional[int] = None
    strategy: StrategyDescriptor
    checked_count: int
    violation_count: int
    satisfied: bool
    worst: Optional[BMCheckResult] = None
    lemma_shortcircuit: Optional[LemmaWitness] = None


def uniform_t_grid(m: int) -> list[float]:
    """The grid t = k / (m + 1), k = 1..m."""
    return [k / (m + 1) for k in range(1, m + 1)]


def combine_rhs(
    t: float, n: float, coeff0: float, coeff1: float, mass0: float, mass1: float
) -> float:
    """(1-t) c0 mu(A0)^(1/n) + t c1 mu(A1)^(1/n); +inf when either c is +inf."""
    if math.isinf(coeff0) or math.isinf(coeff1):
        return math.inf
    return (1.0 - t) * coeff0 * mass0 ** (1.0 / n) + t * coeff1 * mass1 ** (1.0 / n)


def mc_mass_error(
    mass: np.ndarray | float, mc_samples: int, sigma_rule: Optional[float] = None
) -> np.ndarray:
    """
    sigma_rule standard errors of set masses estimated from Voronoi counts.

    The count of a union of cells is binomial, so a set of estimated mass m
    has standard error sqrt(m (1 - m) / mc_samples). The empty and the full
    set are exact.
    """
    sigma_rule = verifier_config.sigma_rule if sigma_rule is None else sigma_rule
    m = np.clip(np.asarray(mass, dtype=np.float64), 0.0, 1.0)
    return sigma_rule * np.sqrt(m * (1.0 - m) / mc_samples)


def mc_root_error(
    mass: np.ndarray | float,
    n: float,
    mc_samples: int,
    sigma_rule: Optional[float] = None,
) -> np.ndarray:
    """
    Largest change of m^(1/n) when m moves by its Monte Carlo mass error.

    Args:
        mass: Estimated set masses
        n: Dimension parameter
        mc_samples: Samples behind the weight estimates
        sigma_rule: Width of the error band in standard errors; defaults to
            the configured sigma_rule

    Returns:
        Array of root-scale errors, same shape as mass
    """
    m = np.clip(np.asarray(mass, dtype=np.float64), 0.0, 1.0)
    delta = mc_mass_error(m, mc_samples, sigma_rule)
    root = m ** (1.0 / n)
    up = np.minimum(m + delta, 1.0) ** (1.0 / n) - root
    down = root - np.maximum(m - delta, 0.0) ** (1.0 / n)
    return np.maximum(up, down)


def combine_slack(
    t: float,
    coeff0: float,
    coeff1: float,
    lhs_error: float,
    error0: float,
    error1: float,
) -> float:
    """Monte Carlo slack of one instance; 0 when the right-hand side is infinite."""
    if math.isinf(coeff0) or math.isinf(coeff1):
        return 0.0
    return lhs_error + (1.0 - t) * coeff0 * error0 + t * coeff1 * error1


def bm_rhs(
    space: MetricMeasureSpace, a0: Subset, a1: Subset, params: BMParams
) -> float:
    """
    Right-hand side of the inequality for (A0, A1) at params.t.

    Raises:
        EmptySubset: If A0 or A1 is empty
    """
    t, n = params.t, params.n
    coeff0, _ = inf_coefficient(space, a0, a1, 1.0 - t, n)
    coeff1, _ = inf_coefficient(space, a0, a1, t, n)
    mass0 = math.fsum(space.weights[space.indices_of(a0)])
    mass1 = math.fsum(space.weights[space.indices_of(a1)])
    return combine_rhs(t, n, coeff0, coeff1, mass0, mass1)


def bm_check_pair(
    space: MetricMeasureSpace,
    a0: Subset,
    a1: Subset,
    params: BMParams,
    tol_report: Optional[float] = None,
    index: Optional[IntermediateIndex] = None,
    mc_samples: Optional[int] = None,
    sigma_rule: Optional[float] = None,
) -> BMCheckResult:
    """
    Evaluate one instance mu(I_t^eps(A0,A1))^(1/n) >= rhs.

    Args:
        space: Validated space
        a0: Nonempty subset A0
        a1: Nonempty subset A1
        params: (eps, n, t)
        tol_report: Slack below zero still counted as satisfied; defaults to
            the configured tol_report
        index: Optional prebuilt intermediate index for (params.t, params.eps)
        mc_samples: Samples behind Monte Carlo weights; when given, the
            instance also gets the slack its masses' sampling error allows
        sigma_rule: Width of that error band; defaults to the configured one

    Returns:
        BMCheckResult, satisfied iff gap >= -(tol_report + mc_slack); an
        infinite right-hand side is never satisfied

    Raises:
        EmptySubset: If A0 or A1 is empty
    """
    tol = verifier_config.tol_report if tol_report is None else tol_report
    t, n = params.t, params.n
    rows = space.indices_of(a0, nonempty=True)
    cols = space.indices_of(a1, nonempty=True)
    if index is not None:
        inside = index.membership(rows, cols)
    else:
        inside = intermediate_membership(space, rows, cols, t, params.eps)

    coeff0, witness0 = inf_coefficient(space, a0, a1, 1.0 - t, n)
    coeff1, witness1 = inf_coefficient(space, a0, a1, t, n)
    mass0 = math.fsum(space.weights[rows])
    mass1 = math.fsum(space.weights[cols])
    i_mass = math.fsum(space.weights[inside])
    lhs = i_mass ** (1.0 / n)
    rhs = combine_rhs(t, n, coeff0, coeff1, mass0, mass1)
    gap = lhs - rhs
    slack = 0.0
    if mc_samples is not None:
        errors = mc_root_error([i_mass, mass0, mass1], n, mc_samples, sigma_rule)
        slack = combine_slack(t, coeff0, coeff1, *(float(e) for e in errors))
    return BMCheckResult(
        a0=[int(i) for i in rows],
        a1=[int(j) for j in cols],
        t=t,
        lhs=lhs,
        rhs=rhs,
        gap=gap,
        mc_slack=slack,
        satisfied=gap >= -(tol + slack),
        mass0=mass0,
        mass1=mass1,
        intermediate_mass=i_mass,
        intermediate_size=int(inside.sum()),
        coeff0=coeff0,
        witness0=witness0,
        coeff1=coeff1,
        witness1=witness1,
    )


# (gap, t position, first key, second key): smallest tuple is the worst
# instance, so the reduction is independent of chunk order.
_Best = tuple[float, int, int, int]


class _Tally(BaseModel):
    checked: int = 0
    violations: int = 0
    best: Optional[_Best] = None

    def merge(self, other: "_Tally") -> "_Tally":
        best = self.best
        if other.best is not None and (best is None or other.best < best):
            best = other.best
        return _Tally(
            checked=self.checked + other.checked,
            violations=self.violations + other.violations,
            best=best,
        )


def _check_t_values(t_values: list[float]) -> list[float]:
    if not t_values:
        raise EmptyTGrid("at least one t value is required")
    for t in t_values:
        check_tau(t)
    return list(t_values)


def _lemma_report(
    space: MetricMeasureSpace,
    params: BMParams,
    t_values: list[float],
    tol: float,
    mc_samples: Optional[int],
) -> Optional[BMVerifyReport]:
    i, j = farthest_pair(space)
    if space.dist[i, j] <= math.pi:
        return None
    logger.info("diameter %r > pi at (%d, %d): unsatisfiable", space.dist[i, j], i, j)
    worst = bm_check_pair(
        space, Subset.of([i]), Subset.of([j]), params.at(t_values[0]), tol
    )
    return BMVerifyReport(
        eps=params.eps,
        n=params.n,
        t_values=t_values,
        tol_report=tol,
        mc_samples=mc_samples,
        strategy=StrategyDescriptor(kind="exhaustive"),
        checked_count=1,
        violation_count=1,
        satisfied=False,
        worst=worst,
        lemma_shortcircuit=LemmaWitness(i=i, j=j, distance=float(space.dist[i, j])),
    )


def _prefix_tables(
    pair_masks: np.ndarray, coeff0: np.ndarray, coeff1: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    For every A0 (as a bitmask) and every point j: the union of pair masks and
    the minima of both coefficient tables over x0 in A0.
    """
    size = pair_masks.shape[0]
    full = 1 << size
    union = np.zeros((full, size), dtype=np.int64)
    min0 = np.full((full, size), math.inf)
    min1 = np.full((full, size), math.inf)
    for i in range(size):
        half = 1 << i
        union[half : 2 * half] = union[:half] | pair_masks[i][None, :]
        min0[half : 2 * half] = np.minimum(min0[:half], coeff0[i][None, :])
        min1[half : 2 * half] = np.minimum(min1[:half], coeff1[i][None, :])
    return union, min0, min1


def _exhaustive_chunk(
    rows: np.ndarray,
    tables: tuple[np.ndarray, np.ndarray, np.ndarray],
    root_mass: np.ndarray,
    t: float,
    t_pos: int,
    tol: float,
    root_error: Optional[np.ndarray] = None,
) -> _Tally:
    union, min0, min1 = tables
    size = union.shape[1]
    full = 1 << size
    block = len(rows)
    inter = np.zeros((block, full), dtype=np.int64)
    c0 = np.full((block, full), math.inf)
    c1 = np.full((block, full), math.inf)
    for j in range(size):
        half = 1 << j
        inter[:, half : 2 * half] = inter[:, :half] | union[rows, j][:, None]
        c0[:, half : 2 * half] = np.minimum(c0[:, :half], min0[rows, j][:, None])
        c1[:, half : 2 * half] = np.minimum(c1[:, :half], min1[rows, j][:, None])

    # Column 0 is the empty A1.
    lhs = root_mass[inter[:, 1:]]
    term0 = (1.0 - t) * c0[:, 1:] * root_mass[rows][:, None]
    term1 = t * c1[:, 1:] * root_mass[None, 1:]
    gap = lhs - (term0 + term1)
    allowed = tol
    if root_error is not None:
        finite = np.isfinite(c0[:, 1:]) & np.isfinite(c1[:, 1:])
        with np.errstate(invalid="ignore"):
            slack = (
                root_error[inter[:, 1:]]
                + (1.0 - t) * c0[:, 1:] * root_error[rows][:, None]
                + t * c1[:, 1:] * root_error[None, 1:]
            )
        allowed = tol + np.where(finite, slack, 0.0)
    k = int(np.argmin(gap))
    r, c = divmod(k, full - 1)
    return _Tally(
        checked=gap.size,
        violations=int(np.count_nonzero(gap < -allowed)),
        best=(float(gap.flat[k]), t_pos, int(rows[r]), c + 1),
    )


def bm_verify_exhaustive(
    space: MetricMeasureSpace,
    params: BMParams,
    t_values: Optional[list[float]] = None,
    tol_report: Optional[float] = None,
    config: Optional[VerifierConfig] = None,
    mc_samples: Optional[int] = None,
) -> BMVerifyReport:
    """
    Check every ordered pair of nonempty subsets at every t.

    A space with diameter > pi is reported unsatisfiable straight away, with
    the farthest pair as witness: two singletons that far apart have an
    infinite right-hand side.

    Args:
        space: Validated space with at most exhaustive_max_points points
        params: eps and n (params.t is ignored in favor of t_values)
        t_values: Interpolation grid; defaults to the configured grid
        tol_report: Reporting slack; defaults to the configured value
        config: Verifier config; defaults to the global one
        mc_samples: Samples behind Monte Carlo weights; adds a per-instance
            slack from the sampling error of the masses involved

    Returns:
        BMVerifyReport with the minimum-gap instance

    Raises:
        SpaceTooLarge: If the space has too many points to enumerate
        EmptyTGrid: If t_values is empty
    """
    config = config or verifier_config
    tol = config.tol_report if tol_report is None else tol_report
    t_values = _check_t_values(
        config.default_t_values if t_values is None else t_values
    )
    size = space.size
    if size > config.exhaustive_max_points:
        raise SpaceTooLarge(
            f"exhaustive verification is limited to "
            f"{config.exhaustive_max_points} points, space has {size}"
        )

    shortcut = _lemma_report(space, params, t_values, tol, mc_samples)
    if shortcut is not None:
        return shortcut

    n = params.n
    mass_table = subset_mass_table(space.weights)
    root_mass = mass_table ** (1.0 / n)
    root_error = None
    if mc_samples is not None:
        root_error = mc_root_error(mass_table, n, mc_samples, config.sigma_rule)
    row_chunks = chunk_ranges((1 << size) - 1, config.exhaustive_chunk_rows)
    tally = _Tally()
    for t_pos, t in enumerate(t_values):
        pair_masks = IntermediateIndex(space, t, params.eps).pair_bitmasks()
        tables = _prefix_tables(
            pair_masks,
            distortion_coefficients(space.dist, 1.0 - t, n),
            distortion_coefficients(space.dist, t, n),
        )
        logger.debug("t=%r: %d chunks of A0 rows", t, len(row_chunks))
        results = ordered_map(
            partial(
                _exhaustive_chunk,
                tables=tables,
                root_mass=root_mass,
                t=t,
                t_pos=t_pos,
                tol=tol,
                root_error=root_error,
            ),
            [np.arange(start + 1, stop + 1) for start, stop in row_chunks],
            config.workers,
        )
        for part in results:
            tally = tally.merge(part)

    if tally.best is None:
        raise RuntimeError("no instance was checked")
    _, t_pos, a0_mask, a1_mask = tally.best
    worst = bm_check_pair(
        space,
        Subset.from_mask(a0_mask),
        Subset.from_mask(a1_mask),
        params.at(t_values[t_pos]),
        tol,
        mc_samples=mc_samples,
        sigma_rule=config.sigma_rule,
    )
    logger.info(
        "exhaustive: %d instances, %d violations", tally.checked, tally.violations
    )
    return BMVerifyReport(
        eps=params.eps,
        n=n,
        t_values=t_values,
        tol_report=tol,
        mc_samples=mc_samples,
        strategy=StrategyDescriptor(kind="exhaustive"),
        checked_count=tally.checked,
        violation_count=tally.violations,
        satisfied=tally.violations == 0,
        worst=worst,
    )


def _sampled_chunk(
    space: MetricMeasureSpace,
    pairs: list[tuple[np.ndarray, np.ndarray]],
    span: tuple[int, int],
    t: float,
    t_pos: int,
    n: float,
    eps: float,
    coeffs: tuple[np.ndarray, np.ndarray],
    index: Optional[IntermediateIndex],
    tol: float,
    mc_samples: Optional[int] = None,
    sigma_rule: Optional[float] = None,
) -> _Tally:
    tally = _Tally()
    for k in range(*span):
        rows, cols = pairs[k]
        if index is not None:
            inside = index.membership(rows, cols)
        else:
            inside = intermediate_membership(space, rows, cols, t, eps)
        block = np.ix_(rows, cols)
        coeff0 = float(coeffs[0][block].min())
        coeff1 = float(coeffs[1][block].min())
        mass0 = math.fsum(space.weights[rows])
        mass1 = math.fsum(space.weights[cols])
        i_mass = math.fsum(space.weights[inside])
        gap = i_mass ** (1.0 / n) - combine_rhs(t, n, coeff0, coeff1, mass0, mass1)
        allowed = tol
        if mc_samples is not None:
            errors = mc_root_error([i_mass, mass0, mass1], n, mc_samples, sigma_rule)
            allowed += combine_slack(t, coeff0, coeff1, *(float(e) for e in errors))
        tally = tally.merge(
            _Tally(checked=1, violations=int(gap < -allowed), best=(gap, t_pos, k, 0))
        )
    return tally


def bm_verify_sampled(
    space: MetricMeasureSpace,
    params: BMParams,
    t_values: Optional[list[float]] = None,
    pair_count: int = 1000,
    sampler: str = "balls",
    seed: int = 0,
    tol_report: Optional[float] = None,
    config: Optional[VerifierConfig] = None,
    mc_samples: Optional[int] = None,
) -> BMVerifyReport:
    """
    Check pair_count random (A0, A1) pairs at every t.

    Pairs are drawn up front from one generator seeded with seed, so the
    report is reproducible bit for bit and independent of the worker count.

    Args:
        space: Validated space
        params: eps and n (params.t is ignored in favor of t_values)
        t_values: Interpolation grid; defaults to the configured grid
        pair_count: Number of pairs, at least 1
        sampler: One of "singletons", "balls", "random"
        seed: Generator seed
        tol_report: Reporting slack; defaults to the configured value
        config: Verifier config; defaults to the global one
        mc_samples: Samples behind Monte Carlo weights; adds a per-instance
            slack from the sampling error of the masses involved

    Returns:
        BMVerifyReport with the minimum-gap instance

    Raises:
        InvalidPairCount: If pair_count < 1
        UnknownSampler: If the sampler name is unknown
        EmptyTGrid: If t_values is empty
    """
    config = config or verifier_config
    tol = config.tol_report if tol_report is None else tol_report
    t_values = _check_t_values(
        config.default_t_values if t_values is None else t_values
    )
    if pair_count < 1:
        raise InvalidPairCount(f"pair_count must be >= 1, got {pair_count}")
    draw = get_sampler(sampler, space, config)

    rng = np.random.default_rng(seed)
    pairs = [draw(rng) for _ in range(pair_count)]
    spans = chunk_ranges(pair_count, max(1, pair_count // (4 * max(1, config.workers))))

    n = params.n
    tally = _Tally()
    for t_pos, t in enumerate(t_values):
        index = None
        if space.size <= config.index_max_points:
            index = IntermediateIndex(space, t, params.eps)
        else:
            logger.warning(
                "space has %d points; scanning intermediate sets directly", space.size
            )
        coeffs = (
            distortion_coefficients(space.dist, 1.0 - t, n),
            distortion_coefficients(space.dist, t, n),
        )
        results = ordered_map(
            partial(
                _sampled_chunk,
                space,
                pairs,
                t=t,
                t_pos=t_pos,
                n=n,
                eps=params.eps,
                coeffs=coeffs,
                index=index,
                tol=tol,
                mc_samples=mc_samples,
                sigma_rule=config.sigma_rule,
            ),
            spans,
            config.workers,
        )
        for part in results:
            tally = tally.merge(part)

    if tally.best is None:
        raise RuntimeError("no instance was checked")
    _, t_pos, k, _ = tally.best
    rows, cols = pairs[k]
    worst = bm_check_pair(
        space,
        Subset.of(rows),
        Subset.of(cols),
        params.at(t_values[t_pos]),
        tol,
        mc_samples=mc_samples,
        sigma_rule=config.sigma_rule,
    )
    logger.info(
        "sampled (%s, seed=%d): %d instances, %d violations",
        sampler,
        seed,
        tally.checked,
        tally.violations,
    )
    return BMVerifyReport(
        eps=params.eps,
        n=n,
        t_values=t_values,
        tol_report=tol,
        mc_samples=mc_samples,
        strategy=StrategyDescriptor(
            kind="sampled", sampler=sampler, seed=seed, pair_count=pair_count
        ),
        checked_count=tally.checked,
        violation_count=tally.violations,
        satisfied=tally.violations == 0,
        worst=worst,
    )
