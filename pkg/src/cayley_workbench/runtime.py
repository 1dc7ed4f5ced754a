"""Deterministic parallel helpers.

CAYLEY_WORKBENCH_THREADS caps worker threads (default 1 = sequential).
Work items carry their own seeds, so the thread count never changes a
result: aggregation is an ordered merge.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable


def thread_count() -> int:
    raw = os.environ.get("CAYLEY_WORKBENCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_indexed(fn: Callable[[int], object], n: int) -> list:
    """[fn(0), ..., fn(n-1)], possibly computed on a thread pool."""
    workers = min(thread_count(), n) if n else 1
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))
