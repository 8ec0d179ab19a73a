"""Bottleneck distance between barcodes, computed exactly over the rationals."""

from fractions import Fraction
from typing import List, Set

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..utils.formatters import INFINITY, Bound
from ..utils.logger import get_logger
from .persistence import Bar, Barcode

logger = get_logger(__name__)


def _compatible(x: Bar, y: Bar, delta: Fraction) -> bool:
    if x.is_infinite != y.is_infinite:
        return False
    if abs(x.birth - y.birth) > delta:
        return False
    return x.is_infinite or abs(x.death - y.death) <= delta


def _deletable(x: Bar, delta: Fraction) -> bool:
    return not x.is_infinite and x.length <= 2 * delta


def matching_exists(xs: List[Bar], ys: List[Bar], delta: Fraction) -> bool:
    """Whether a delta-matching between two single-degree bar lists exists.

    Each side is padded with one diagonal slot per bar of the other side, so a
    perfect zero-cost assignment in the padded square is exactly a delta-matching.
    """
    n1, n2 = len(xs), len(ys)
    size = n1 + n2
    if size == 0:
        return True
    cost = np.ones((size, size), dtype=np.int64)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if _compatible(x, y, delta):
                cost[i, j] = 0
        if _deletable(x, delta):
            cost[i, n2 + i] = 0
    for j, y in enumerate(ys):
        if _deletable(y, delta):
            cost[n1 + j, j] = 0
    cost[n1:, n2:] = 0
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum()) == 0


def _candidates(xs: List[Bar], ys: List[Bar]) -> List[Fraction]:
    values: Set[Fraction] = {Fraction(0)}
    for bar in xs + ys:
        if not bar.is_infinite:
            values.add(Fraction(bar.length) / 2)
    for x in xs:
        for y in ys:
            if x.is_infinite != y.is_infinite:
                continue
            values.add(abs(x.birth - y.birth))
            if not x.is_infinite:
                values.add(abs(x.death - y.death))
    return sorted(values)


def degree_distance(xs: List[Bar], ys: List[Bar]) -> Bound:
    """Bottleneck distance between two lists of unit bars of one degree."""
    if sum(b.is_infinite for b in xs) != sum(b.is_infinite for b in ys):
        return INFINITY
    candidates = _candidates(xs, ys)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if matching_exists(xs, ys, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_distance(b1: Barcode, b2: Barcode) -> Bound:
    """Maximum over degrees of the bottleneck distance; ``inf`` if infinite bars differ in count."""
    result: Bound = Fraction(0)
    left, right = b1.expanded(), b2.expanded()
    degrees = sorted({b.degree for b in left} | {b.degree for b in right})
    for deg in degrees:
        xs = [b for b in left if b.degree == deg]
        ys = [b for b in right if b.degree == deg]
        dist = degree_distance(xs, ys)
        logger.debug("Bottleneck distance in degree %d: %s", deg, dist)
        result = max(result, dist)
        if result == INFINITY:
            break
    return result
