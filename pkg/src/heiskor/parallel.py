"""Worker-pool helper for grid scans.

Scans are embarrassingly parallel; every grid entry is a pure function of
its point, so results are identical for any worker count.  The
environment variable HEISKOR_THREADS (a positive integer) caps the number
of worker processes a caller may request.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigError

_ENV_CAP = "HEISKOR_THREADS"


def worker_cap() -> int:
    """The configured worker cap (HEISKOR_THREADS, default: cpu count)."""
    raw = os.environ.get(_ENV_CAP)
    if raw is None:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"{_ENV_CAP} must be a positive integer, got {raw!r}")
    if cap < 1:
        raise ConfigError(f"{_ENV_CAP} must be a positive integer, got {raw!r}")
    return cap


def resolve_workers(requested: int | None) -> int:
    """Clamp a requested worker count to the environment cap."""
    cap = worker_cap()
    if requested is None:
        return 1
    if requested < 1:
        raise ConfigError("worker count must be positive")
    return min(requested, cap, os.cpu_count() or 1)


def map_ordered(fn, items, workers: int | None = None) -> list:
    """Apply ``fn`` to every item, preserving order.

    ``fn`` must be picklable (module level) when workers > 1; results are
    assembled by index so the output is independent of scheduling.
    """
    n = resolve_workers(workers)
    items = list(items)
    if n <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))
