"""Integer-grid searches used by the optimizer's voltage scan."""

import math
from collections.abc import Callable

__all__ = ["GOLDEN_RATIO", "golden_section_argmax", "first_true", "last_true"]

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def golden_section_argmax(f: Callable[[int], float], lo: int, hi: int) -> int:
    """Find the index maximizing a unimodal sequence on the integers ``[lo, hi]``.

    The bracket shrinks by golden-section steps until at most four indices
    remain, which are scanned; ties resolve to the lowest index.

    Examples:
        >>> golden_section_argmax(lambda i: -abs(i - 37), 0, 1000)
        37
        >>> golden_section_argmax(lambda i: i, 0, 10)
        10
    """
    if hi < lo:
        raise ValueError(f"Empty search interval [{lo}, {hi}]")

    cache: dict[int, float] = {}

    def value(i: int) -> float:
        if i not in cache:
            cache[i] = f(i)
        return cache[i]

    while hi - lo > 3:
        span = hi - lo
        c = lo + int(round(span - span / GOLDEN_RATIO))
        d = lo + int(round(span / GOLDEN_RATIO))
        if c >= d:
            d = c + 1
        fc, fd = value(c), value(d)
        if fc < fd:
            lo = c + 1
        elif fc > fd:
            hi = d - 1
        else:
            lo, hi = c, d

    best = lo
    for i in range(lo + 1, hi + 1):
        if value(i) > value(best):
            best = i
    return best


def first_true(predicate: Callable[[int], bool], lo: int, hi: int) -> int | None:
    """Smallest index in ``[lo, hi]`` where a monotone (False..True) predicate holds."""
    if hi < lo or not predicate(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def last_true(predicate: Callable[[int], bool], lo: int, hi: int) -> int | None:
    """Largest index in ``[lo, hi]`` where a monotone (True..False) predicate holds."""
    if hi < lo or not predicate(lo):
        return None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if predicate(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo
