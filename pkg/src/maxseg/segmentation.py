"""First pass of the segment miner: segment sizing, item support vectors, priorities.

Segment indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Itemset, SupportThreshold, TransactionSource


@dataclass(frozen=True)
class SegmentPlan:
    bounds: tuple[tuple[int, int], ...]  # (start_index, length) per segment

    @property
    def num_segments(self) -> int:
        return len(self.bounds)

    @property
    def num_transactions(self) -> int:
        return sum(length for _, length in self.bounds)


@dataclass(frozen=True)
class ItemSupportVector:
    segment_index: int
    counts: tuple[int, ...]  # indexed by item id

    def __getitem__(self, item: int) -> int:
        return self.counts[item] if item < len(self.counts) else 0


@dataclass(frozen=True)
class SegmentPriority:
    order: tuple[int, ...]
    h: tuple[int, ...]


def max_segments(num_transactions: int, threshold: SupportThreshold) -> int:
    """Upper bound on the segment count: floor(100 / min_sup%), at least 1."""
    if num_transactions <= 0:
        return 1
    pct = threshold.as_percentage(num_transactions)
    return max(1, math.floor(100 / pct))


def plan_segments(
    num_transactions: int,
    threshold: SupportThreshold,
    requested_segments: int | None = None,
) -> SegmentPlan:
    """Split ``num_transactions`` into contiguous, near-equal segments.

    The count defaults to the bound from :func:`max_segments`; a requested
    count is clamped to it.  The first ``n % k`` segments get the extra row.
    """
    if requested_segments is not None and requested_segments < 1:
        raise ValueError("requested_segments must be at least 1")
    if num_transactions < 0:
        raise ValueError("num_transactions must be non-negative")
    bound = min(max_segments(num_transactions, threshold), max(num_transactions, 1))
    k = bound if requested_segments is None else min(requested_segments, bound)

    base, extra = divmod(num_transactions, k)
    bounds = []
    start = 0
    for i in range(k):
        length = base + (1 if i < extra else 0)
        bounds.append((start, length))
        start += length
    return SegmentPlan(tuple(bounds))


def scan_isvs(source: TransactionSource, plan: SegmentPlan) -> list[ItemSupportVector]:
    """Fill one ISV per segment in a single pass over ``source``."""
    if plan.num_transactions != len(source):
        raise ValueError(
            f"plan covers {plan.num_transactions} transactions, source has {len(source)}"
        )
    n_items = source.num_items()
    counts = [[0] * n_items for _ in plan.bounds]
    ends = [start + length for start, length in plan.bounds]
    seg = 0
    for row, t in enumerate(source.scan()):
        while row >= ends[seg]:
            seg += 1
        c = counts[seg]
        for item in t.items:
            c[item] += 1
    return [ItemSupportVector(i, tuple(c)) for i, c in enumerate(counts)]


def vertical_counts(isvs: Sequence[ItemSupportVector]) -> list[int]:
    """Global support of every item: column sums over all ISVs."""
    width = max((len(v.counts) for v in isvs), default=0)
    return [sum(v[i] for v in isvs) for i in range(width)]


def frequent_items(isvs: Sequence[ItemSupportVector], min_count: int) -> Itemset:
    return tuple(i for i, total in enumerate(vertical_counts(isvs)) if total >= min_count)


def horizontal_counts(isvs: Sequence[ItemSupportVector], frequent: Itemset) -> list[int]:
    return [sum(v[i] for i in frequent) for v in isvs]


def prioritize(h: Sequence[int]) -> SegmentPriority:
    """Order segments by horizontal count, highest first; ties keep index order."""
    order = sorted(range(len(h)), key=lambda i: (-h[i], i))
    return SegmentPriority(tuple(order), tuple(h))
