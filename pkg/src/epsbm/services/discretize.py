"""Discretization of round spheres into finite metric measure spaces."""

import logging
import math
from functools import partial
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from epsbm.config.settings import DiscretizationConfig, discretization_config
from epsbm.core.errors import (
    BadSampleBudget,
    EmptyCell,
    EpsBMError,
    InvalidCount,
    InvalidEps,
    UnsupportedDimensionForMethod,
)
from epsbm.core.models import MetricMeasureSpace
from epsbm.core.validation import RawSpace, validate_space
from epsbm.utils.parallel import chunk_ranges, ordered_map

logger = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
QUERY_CHUNK = 10_000

SampleMethod = Literal["fibonacci", "uniform_random"]
CloudMetric = Literal["sphere", "euclidean"]


def geodesic_distances(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Great-circle distances between rows of unit vectors x and y."""
    return np.arccos(np.clip(x @ y.T, -1.0, 1.0))


def euclidean_distances(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Euclidean distances between rows of x and y."""
    sq = (x * x).sum(axis=1)[:, None] + (y * y).sum(axis=1)[None, :] - 2.0 * x @ y.T
    return np.sqrt(np.maximum(sq, 0.0))


class PointCloud(BaseModel):
    """A finite set of points with the metric used to compare them."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    metric: CloudMetric = "sphere"

    @model_validator(mode="after")
    def _check_points(self) -> "PointCloud":
        if self.points.ndim != 2 or len(self.points) < 1:
            raise ValueError("points must be a nonempty (count, dim) array")
        if self.metric == "sphere":
            norms = np.linalg.norm(self.points, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-12):
                raise ValueError("sphere points must be unit vectors")
        return self

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def distances(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Distance matrix between two arrays of points under this metric."""
        if self.metric == "sphere":
            return geodesic_distances(x, y)
        return euclidean_distances(x, y)

    def distances_from(self, index: int) -> np.ndarray:
        """Distances from one cloud point to every cloud point."""
        row = self.distances(self.points[index : index + 1], self.points)[0]
        row[index] = 0.0
        return row


def sphere_sample(
    m: int, count: int, method: SampleMethod = "fibonacci", seed: int = 0
) -> PointCloud:
    """
    Points on the unit m-sphere in R^(m+1).

    Args:
        m: Sphere dimension
        count: Number of points, at least 2
        method: "fibonacci" (golden-angle spiral, m = 2 only) or
            "uniform_random" (normalized standard Gaussian vectors)
        seed: Generator seed for uniform_random

    Returns:
        PointCloud with the geodesic metric

    Raises:
        InvalidCount: If count < 2 or m < 1
        UnsupportedDimensionForMethod: If fibonacci is asked for m != 2
    """
    if count < 2 or m < 1:
        raise InvalidCount(f"need m >= 1 and count >= 2, got m={m}, count={count}")
    if method == "fibonacci":
        if m != 2:
            raise UnsupportedDimensionForMethod(
                f"fibonacci sampling is only defined on S^2, not S^{m}"
            )
        i = np.arange(count, dtype=np.float64)
        z = 1.0 - (2.0 * i + 1.0) / count
        rho = np.sqrt(1.0 - z * z)
        phi = i * GOLDEN_ANGLE
        points = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    elif method == "uniform_random":
        rng = np.random.default_rng(seed)
        points = rng.standard_normal((count, m + 1))
    else:
        raise EpsBMError(f"unknown sampling method {method!r}")
    points /= np.linalg.norm(points, axis=1)[:, None]
    return PointCloud(points=points, metric="sphere")


class NetResult(BaseModel):
    """Centers chosen by farthest-point traversal."""

    center_indices: list[int]
    covering_radius: float
    eps_reached: Optional[bool] = None


def farthest_point_net(
    cloud: PointCloud, k: Optional[int] = None, target_eps: Optional[float] = None
) -> NetResult:
    """
    Greedy farthest-point traversal from cloud point 0.

    Stops after k centers, or once every cloud point lies within target_eps
    of a center, whichever comes first. If k stops it before target_eps is
    met, the centers found so far are returned with eps_reached False.

    Raises:
        InvalidCount: If k is not in [1, cloud.count]
        InvalidEps: If target_eps <= 0
        EpsBMError: If neither k nor target_eps is given
    """
    if k is None and target_eps is None:
        raise EpsBMError("farthest_point_net needs k or target_eps")
    if k is not None and not (1 <= k <= cloud.count):
        raise InvalidCount(f"k must lie in [1, {cloud.count}], got {k}")
    if target_eps is not None and not target_eps > 0.0:
        raise InvalidEps(f"target_eps must be > 0, got {target_eps!r}")

    centers = [0]
    nearest = cloud.distances_from(0)
    while len(centers) < cloud.count:
        if target_eps is not None and nearest.max() <= target_eps:
            break
        if k is not None and len(centers) >= k:
            break
        nxt = int(np.argmax(nearest))
        centers.append(nxt)
        nearest = np.minimum(nearest, cloud.distances_from(nxt))

    radius = float(nearest.max())
    reached = None
    if target_eps is not None:
        reached = radius <= target_eps
        if not reached:
            logger.warning(
                "target eps %r not reached with %d centers (radius %r)",
                target_eps,
                len(centers),
                radius,
            )
    return NetResult(
        center_indices=centers, covering_radius=radius, eps_reached=reached
    )


def covering_radius(
    cloud: PointCloud, centers: list[int], queries: np.ndarray
) -> float:
    """Largest distance from a query point to its nearest center."""
    anchor = cloud.points[centers]
    worst = 0.0
    for start, stop in chunk_ranges(len(queries), QUERY_CHUNK):
        d = cloud.distances(queries[start:stop], anchor)
        worst = max(worst, float(d.min(axis=1).max()))
    return worst


class VoronoiWeights(BaseModel):
    """Monte Carlo estimates of the Voronoi cell measures."""

    counts: list[int]
    weights: list[float]
    stderr: list[float]
    sample_covering_radius: float
    mc_samples: int
    seed: int


def _assign_batch(
    batch: tuple[int, tuple[int, int]], anchor: np.ndarray, seed: int
) -> tuple[np.ndarray, float]:
    number, (start, stop) = batch
    rng = np.random.default_rng([seed, number])
    samples = rng.standard_normal((stop - start, anchor.shape[1]))
    samples /= np.linalg.norm(samples, axis=1)[:, None]
    dots = samples @ anchor.T
    nearest = np.argmax(dots, axis=1)
    closest = dots[np.arange(len(nearest)), nearest]
    farthest = float(np.arccos(np.clip(closest.min(), -1.0, 1.0)))
    return np.bincount(nearest, minlength=anchor.shape[0]), farthest


def voronoi_weights(
    cloud: PointCloud,
    centers: list[int],
    mc_samples: int,
    seed: int,
    config: Optional[DiscretizationConfig] = None,
) -> VoronoiWeights:
    """
    Estimate the measure of each center's Voronoi cell on the sphere.

    Samples are uniform on the sphere and go to the nearest center, ties to
    the lowest index; the cells are pairwise disjoint and cover every sample.
    Batch b draws from its own generator seeded with (seed, b), so counts do
    not depend on how batches are spread over workers.

    Args:
        cloud: Sphere point cloud the centers index into
        centers: Center indices, nonempty
        mc_samples: Number of samples, at least min_samples_per_center per center
        seed: Base seed
        config: Discretization config; defaults to the global one

    Returns:
        VoronoiWeights with counts, weights, standard errors and the largest
        sample-to-center distance

    Raises:
        InvalidCount: If centers is empty
        BadSampleBudget: If mc_samples is too small
        EmptyCell: If some cell receives no sample
    """
    config = config or discretization_config
    if not centers:
        raise InvalidCount("at least one center is required")
    if cloud.metric != "sphere":
        raise EpsBMError("Monte Carlo cell measures need a sphere point cloud")
    if mc_samples < config.min_samples_per_center * len(centers):
        raise BadSampleBudget(
            f"{mc_samples} samples for {len(centers)} centers; need at least "
            f"{config.min_samples_per_center} per center"
        )

    anchor = cloud.points[centers]
    batches = list(enumerate(chunk_ranges(mc_samples, config.mc_batch_size)))
    logger.info("assigning %d samples in %d batches", mc_samples, len(batches))
    parts = ordered_map(
        partial(_assign_batch, anchor=anchor, seed=seed), batches, config.workers
    )
    counts = np.sum([p[0] for p in parts], axis=0)
    empty = np.flatnonzero(counts == 0)
    if len(empty):
        raise EmptyCell(
            f"{len(empty)} cell(s) got no sample (first: center {int(empty[0])}); "
            "use fewer centers or more samples"
        )
    weights = counts / mc_samples
    stderr = np.sqrt(weights * (1.0 - weights) / mc_samples)
    return VoronoiWeights(
        counts=[int(c) for c in counts],
        weights=[float(w) for w in weights],
        stderr=[float(s) for s in stderr],
        sample_covering_radius=max(p[1] for p in parts),
        mc_samples=mc_samples,
        seed=seed,
    )


class DiscretizationSummary(BaseModel):
    """Metadata of a discretization, without the distance matrix."""

    m: int
    center_count: int
    cloud_size: int
    cloud_method: SampleMethod
    mc_samples: int
    seed: int
    covering_radius: float
    sample_covering_radius: float
    effective_eps: float
    diameter: float
    min_weight: float
    max_weight: float
    max_stderr: float


class DiscretizationResult(BaseModel):
    """A discretized sphere together with how it was built."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    space: MetricMeasureSpace
    m: int
    cloud_size: int
    cloud_method: SampleMethod
    covering_radius: float
    sample_covering_radius: float
    center_indices: list[int]
    mc_samples: int
    seed: int
    weight_stderr: list[float]

    @computed_field
    @property
    def effective_eps(self) -> float:
        """The larger of the cloud and sample covering radii."""
        return max(self.covering_radius, self.sample_covering_radius)

    def summary(self) -> DiscretizationSummary:
        return DiscretizationSummary(
            m=self.m,
            center_count=self.space.size,
            cloud_size=self.cloud_size,
            cloud_method=self.cloud_method,
            mc_samples=self.mc_samples,
            seed=self.seed,
            covering_radius=self.covering_radius,
            sample_covering_radius=self.sample_covering_radius,
            effective_eps=self.effective_eps,
            diameter=self.space.max_distance,
            min_weight=float(self.space.weights.min()),
            max_weight=float(self.space.weights.max()),
            max_stderr=max(self.weight_stderr),
        )


def discretize_sphere(
    m: int,
    center_count: int,
    mc_samples: int,
    seed: int,
    cloud_size: Optional[int] = None,
    config: Optional[DiscretizationConfig] = None,
) -> DiscretizationResult:
    """
    Discretize the round m-sphere with normalized volume.

    A dense cloud (Fibonacci spiral on S^2, seeded uniform points otherwise)
    is thinned to center_count centers by farthest-point traversal; each
    center carries the Monte Carlo measure of its Voronoi cell, and centers
    are compared by geodesic distance.

    Args:
        m: Sphere dimension (pairs with n = m in verifier calls)
        center_count: Number of points of the discretization
        mc_samples: Monte Carlo samples for the cell measures
        seed: Seed for the cloud (uniform method) and the samples
        cloud_size: Dense cloud size; defaults to the configured size
        config: Discretization config; defaults to the global one

    Returns:
        DiscretizationResult holding a validated space

    Raises:
        InvalidCount: If center_count < 1 or exceeds the cloud size
        BadSampleBudget, EmptyCell: From the cell measure estimate
    """
    config = config or discretization_config
    if center_count < 1:
        raise InvalidCount(f"center_count must be >= 1, got {center_count}")
    cloud_size = cloud_size or max(config.dense_cloud_size, center_count)
    method: SampleMethod = "fibonacci" if m == 2 else "uniform_random"
    cloud = sphere_sample(m, cloud_size, method, seed)

    net = farthest_point_net(cloud, k=center_count)
    cells = voronoi_weights(cloud, net.center_indices, mc_samples, seed, config)

    anchor = cloud.points[net.center_indices]
    dist = geodesic_distances(anchor, anchor)
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    space = validate_space(
        RawSpace(
            labels=[f"c{i}" for i in net.center_indices],
            dist=dist.tolist(),
            weights=cells.weights,
        )
    )
    logger.info(
        "discretized S^%d: %d centers, covering radius %.6f (samples %.6f)",
        m,
        center_count,
        net.covering_radius,
        cells.sample_covering_radius,
    )
    return DiscretizationResult(
        space=space,
        m=m,
        cloud_size=cloud_size,
        cloud_method=method,
        covering_radius=net.covering_radius,
        sample_covering_radius=cells.sample_covering_radius,
        center_indices=net.center_indices,
        mc_samples=mc_samples,
        seed=seed,
        weight_stderr=cells.stderr,
    )
