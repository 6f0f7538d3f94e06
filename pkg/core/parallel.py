"""Order-preserving parallel map over a thread pool.

numpy releases the GIL inside its linear-algebra kernels, so threads are
enough for the torus scans. Results always come back in input order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int] = None) -> int:
    """Resolve the worker count from an explicit value or BDL_THREADS."""
    if workers is not None and workers > 0:
        return workers
    return settings.worker_count()


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    workers: Optional[int] = None,
) -> List[R]:
    """
    Apply fn to every item, possibly in parallel.

    Args:
        fn: Pure function to apply
        items: Inputs
        workers: Worker count (defaults to BDL_THREADS / implementation default)

    Returns:
        List of results in the order of items
    """
    count = resolve_workers(workers)
    if count <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug("parallel_map: %d items on %d workers", len(items), count)
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, items))
