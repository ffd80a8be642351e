"""
Bounded Worker Pool

Case sweeps are independent and pure, so they are fanned out over a process
pool and collected in submission order, which keeps reports deterministic.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@contextmanager
def worker_pool(jobs: int) -> Iterator[ProcessPoolExecutor]:
    """
    Context manager for a process pool of `jobs` workers.

    Yields:
        ProcessPoolExecutor: Pool that is shut down on exit
    """
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        yield pool
    except Exception as e:
        logger.error(f"Worker pool error: {e}")
        pool.shutdown(wait=False, cancel_futures=True)
        raise
    finally:
        pool.shutdown(wait=True)


def run_parallel(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """
    Apply fn to every item, results in input order.

    Args:
        fn: Picklable top-level function
        items: Work items
        jobs: Worker count; 1 runs inline in this process

    Returns:
        list: fn(item) for each item, in order
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(jobs, len(items))
    chunksize = max(1, len(items) // (workers * 4))
    logger.debug(f"Dispatching {len(items)} items to {workers} workers (chunksize {chunksize})")
    with worker_pool(workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
