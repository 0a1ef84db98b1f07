"""Deterministic chunked work distribution.

Grids are split into fixed chunks; chunk results are merged in chunk order,
so the output is bit-identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int | None) -> int:
    if threads is not None and threads >= 1:
        return threads
    env = os.environ.get("EXTREMA_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def chunked_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Map preserving order; numpy-heavy fn releases the GIL so threads help."""
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def chunk_ranges(n: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(n, lo + chunk)) for lo in range(0, n, chunk)]
