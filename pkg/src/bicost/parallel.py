"""Ordered data-parallel map capped by the ``BICOST_THREADS`` environment variable."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Threads allowed for sweeps; ``BICOST_THREADS`` (default 1, invalid values fall back to 1)."""
    try:
        return max(1, int(os.environ.get("BICOST_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items) -> list:
    """``[fn(x) for x in items]``, evaluated on up to :func:`worker_count` threads, in input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
