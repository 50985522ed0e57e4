"""Random metric measure spaces for property tests."""

import numpy as np
from hypothesis import strategies as st

from epsbm.core.models import MetricMeasureSpace
from epsbm.core.validation import RawSpace, validate_space


def random_metric_space(seed: int, size: int) -> MetricMeasureSpace:
    """
    A random symmetric matrix closed under shortest paths, so it lies in the
    metric cone, with Dirichlet weights.
    """
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.uniform(0.1, 1.0, (size, size)), k=1)
    dist = upper + upper.T
    for k in range(size):
        dist = np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :])
    weights = rng.dirichlet(np.ones(size))
    return validate_space(RawSpace(dist=dist.tolist(), weights=weights.tolist()))


seeds = st.integers(min_value=0, max_value=2**32 - 1)

metric_spaces = st.builds(random_metric_space, seeds, st.integers(2, 8))
small_metric_spaces = st.builds(random_metric_space, seeds, st.integers(2, 5))

dyadic_t = st.sampled_from([0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875])
