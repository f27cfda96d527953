"""
Thread-pool helper for row-parallel rendering and parameter sweeps.

numpy releases the GIL inside its vectorized kernels, so threads are enough;
results always come back in submission order.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError

logger = logging.getLogger("Zitterdyn.parallel")

THREADS_ENV = "ZITTERDYN_THREADS"


def worker_count(requested=None):
    """Worker count: explicit request, else ZITTERDYN_THREADS, else min(8, cpu count)."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None or raw.strip() == "":
            return min(8, os.cpu_count() or 1)
        try:
            requested = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}", value=raw) from None
    if requested < 1:
        raise ConfigError(f"Worker count must be at least 1, got {requested}", workers=requested)
    return requested


def map_ordered(func, items, workers=None):
    """Apply func to every item on a thread pool; the result list follows the item order."""
    items = list(items)
    workers = worker_count(workers)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Fanning out {len(items)} tasks over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
