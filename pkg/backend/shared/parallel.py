"""Ordered fan-out over a thread pool."""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item and return results in submission order.

    Results are collected in the order the items were submitted, never in
    completion order, so any reduction over the returned list is independent of
    the worker count.

    Args:
        fn (Callable): Pure function of one work unit.
        items (Iterable): Work units.
        workers (int): Thread count; 1 runs inline.

    Returns:
        list: ``[fn(item) for item in items]``.
    """
    units = list(items)
    if workers <= 1 or len(units) <= 1:
        return [fn(unit) for unit in units]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        tasks = [executor.submit(fn, unit) for unit in units]
        return [task.result() for task in tasks]


def chunked(n: int, size: int) -> list[range]:
    """Split ``range(n)`` into contiguous ranges of at most ``size`` items.

    Chunk boundaries depend only on ``n`` and ``size``, never on the worker count.
    """
    if size < 1:
        raise ValueError(f"chunk size must be positive, got {size}")
    return [range(lo, min(lo + size, n)) for lo in range(0, n, size)]
