"""Ordered chunk execution on a thread pool."""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int) -> int:
    """Map 0 or a negative count to the number of CPUs."""
    if workers <= 0:
        return os.cpu_count() or 1
    return workers


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply fn to every item and return the results in input order.

    With one worker everything runs inline. numpy kernels release the GIL, so
    threads are enough for the chunked array work done here.

    Args:
        fn: Function applied to each item
        items: Work items (chunks)
        workers: Thread count; 0 means one per CPU

    Returns:
        List of results, aligned with items
    """
    workers = resolve_workers(workers)
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def chunk_ranges(total: int, chunk: int) -> Sequence[tuple[int, int]]:
    """Split range(total) into consecutive (start, stop) chunks."""
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]
