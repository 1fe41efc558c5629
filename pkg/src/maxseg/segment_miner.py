"""Two-pass segment miner for maximal frequent itemsets.

Pass 1 fills the item support vectors and ranks segments by horizontal count
(see :mod:`maxseg.segmentation`).  Pass 2 reads the segments in priority
order and feeds each transaction's frequent-item projection through two
pattern tables:

``mf``
    the Maximal Frequent Table, an antichain of patterns known to be frequent;
``mfc``
    the Maximal Frequent Candidate Table, patterns still below the threshold.

A final step intersects the remaining candidates to recover maximal itemsets
that never occurred verbatim as a projection.

Candidate counts follow one rule: the count of a candidate pattern ``X`` is
the number of transactions processed so far whose projection reached the
candidate table and contains ``X``.  To keep that exact when candidates nest,
the table also tracks how many transactions projected to each pattern
*exactly* (``mult``); a newly inserted pattern starts from the summed
multiplicities of its stored supersets.  For any pattern that is not a subset
of an ``mf`` entry the count equals its true support, which is what makes
the final result exact.
"""

from __future__ import annotations

import time
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .core import (
    Itemset,
    MiningResult,
    SupportThreshold,
    Transaction,
    TransactionSource,
    from_mask,
    iter_bits,
    resolve_threshold,
    to_mask,
)
from .segmentation import (
    SegmentPlan,
    SegmentPriority,
    frequent_items,
    horizontal_counts,
    plan_segments,
    prioritize,
    scan_isvs,
)


def project(t: Transaction | Sequence[int], frequent: Iterable[int]) -> Itemset:
    items = t.items if isinstance(t, Transaction) else t
    keep = set(frequent)
    return tuple(i for i in items if i in keep)


def _promotion_key(mask: int) -> tuple[int, Itemset]:
    return (-mask.bit_count(), from_mask(mask))


class _CandidateTable:
    """Candidate patterns with their counts, stored column-wise for numpy.

    Each live pattern owns a slot.  ``packed[slot]`` holds the pattern as
    uint64 words over the frequent items (renumbered densely), so "stored
    subsets of p" and "stored supersets of p" are one vectorised AND and
    compare each, and counters for every matching slot update in one op.
    """

    def __init__(self, universe: int, capacity: int = 64):
        self.dense_bit = {item: 1 << r for r, item in enumerate(iter_bits(universe))}
        self.words = max(1, -(-len(self.dense_bit) // 64))
        self.packed = np.zeros((capacity, self.words), dtype=np.uint64)
        self.count = np.zeros(capacity, dtype=np.int64)
        self.mult = np.zeros(capacity, dtype=np.int64)
        self.live = np.zeros(capacity, dtype=bool)
        self.pattern_at: list[int] = [0] * capacity
        self.slot_of: dict[int, int] = {}
        self._free = list(range(capacity - 1, -1, -1))
        self._cache: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.slot_of)

    def __contains__(self, pattern: int) -> bool:
        return pattern in self.slot_of

    def _grow(self) -> None:
        old = len(self.count)
        self.packed = np.concatenate([self.packed, np.zeros_like(self.packed)])
        self.count = np.concatenate([self.count, np.zeros(old, dtype=np.int64)])
        self.mult = np.concatenate([self.mult, np.zeros(old, dtype=np.int64)])
        self.live = np.concatenate([self.live, np.zeros(old, dtype=bool)])
        self.pattern_at.extend([0] * old)
        self._free.extend(range(2 * old - 1, old - 1, -1))

    def pack(self, pattern: int) -> np.ndarray:
        packed = self._cache.get(pattern)
        if packed is None:
            dense = 0
            for i in iter_bits(pattern):
                dense |= self.dense_bit[i]
            packed = np.array([(dense >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(self.words)],
                              dtype=np.uint64)
            self._cache[pattern] = packed
        return packed

    def add(self, pattern: int, count: int, mult: int) -> None:
        if not self._free:
            self._grow()
        slot = self._free.pop()
        self.slot_of[pattern] = slot
        self.pattern_at[slot] = pattern
        self.packed[slot] = self.pack(pattern)
        self.count[slot] = count
        self.mult[slot] = mult
        self.live[slot] = True

    def remove(self, pattern: int) -> int:
        """Drop ``pattern`` and return its count."""
        slot = self.slot_of.pop(pattern)
        self.live[slot] = False
        self._free.append(slot)
        return int(self.count[slot])

    def supersets(self, pattern: int) -> np.ndarray:
        """Boolean slot mask of stored patterns containing ``pattern`` (itself included)."""
        q = self.pack(pattern)
        hit = (self.packed & q) == q
        return self.live & (hit[:, 0] if self.words == 1 else hit.all(axis=1))

    def subsets(self, pattern: int) -> np.ndarray:
        """Boolean slot mask of stored patterns contained in ``pattern`` (itself included)."""
        hit = (self.packed & ~self.pack(pattern)) == 0
        return self.live & (hit[:, 0] if self.words == 1 else hit.all(axis=1))

    def patterns(self, slots: np.ndarray) -> list[int]:
        return [self.pattern_at[s] for s in np.flatnonzero(slots).tolist()]

    def items(self):
        for pattern, slot in self.slot_of.items():
            yield pattern, int(self.count[slot]), int(self.mult[slot])


class MinerState:
    """Mutable pair of pattern tables plus the bookkeeping for step-wise mining.

    Patterns are stored as item bitmasks.  Use :meth:`tables` for a readable
    snapshot keyed by itemset tuples.

    ``literal=True`` switches to naive counting: superset counts are summed
    without regard to nesting, and the final step runs a single round of
    pairwise intersection.  It exists so the exact mode
    can be compared against it; it is not exact in general.
    """

    def __init__(self, frequent: Iterable[int], min_count: int, literal: bool = False):
        if min_count < 1:
            raise ValueError("min_count must be at least 1")
        self.frequent = to_mask(frequent)
        self.min_count = min_count
        self.literal = literal
        self.mf: dict[int, int] = {}
        self._table = _CandidateTable(self.frequent)
        self.processed = 0

    @classmethod
    def from_tables(
        cls,
        frequent: Iterable[int],
        min_count: int,
        mf: Mapping[Sequence[int], int] = (),
        mfc: Mapping[Sequence[int], int] = (),
        literal: bool = False,
    ) -> "MinerState":
        """Rebuild a state from printed tables.

        Exact multiplicities are recovered from the candidate counts by
        peeling supersets off, longest patterns first.
        """
        state = cls(frequent, min_count, literal=literal)
        for items, count in dict(mf).items():
            state.mf[to_mask(items)] = count
        masks = {to_mask(items): count for items, count in dict(mfc).items()}
        for m in masks:
            if m & ~state.frequent:
                raise ValueError(f"pattern {from_mask(m)} uses infrequent items")
        mult: dict[int, int] = {}
        for m in sorted(masks, key=lambda m: -m.bit_count()):
            above = sum(mult[s] for s in mult if m & ~s == 0)
            mult[m] = masks[m] - above
        for m, count in masks.items():
            state._table.add(m, count, mult[m])
        return state

    # -- snapshots ---------------------------------------------------------

    @property
    def mfc(self) -> dict[int, int]:
        """Candidate table as ``{pattern mask: count}``."""
        return {m: c for m, c, _ in self._table.items()}

    @property
    def mult(self) -> dict[int, int]:
        """How many processed projections equalled each candidate pattern."""
        return {m: k for m, _, k in self._table.items()}

    def tables(self) -> tuple[dict[Itemset, int], dict[Itemset, int]]:
        return (
            {from_mask(m): c for m, c in self.mf.items()},
            {from_mask(m): c for m, c in self.mfc.items()},
        )

    def under_mf(self, pattern: int) -> bool:
        return any(pattern & ~y == 0 for y in self.mf)

    # -- pass 2 ------------------------------------------------------------

    def process_pattern(self, pattern: Sequence[int] | int) -> None:
        """Feed one projected transaction through the table checks and promotion."""
        p = pattern if isinstance(pattern, int) else to_mask(pattern)
        if p & ~self.frequent:
            raise ValueError(f"pattern {from_mask(p)} contains infrequent items")
        if not p:
            return
        self.processed += 1

        if self.mf:
            if p in self.mf:
                self.mf[p] += 1
                return
            if self.under_mf(p):
                return
            for y in self.mf:
                if y & ~p == 0:
                    self.mf[y] += 1

        touched = self._insert_candidate(p)
        table = self._table
        self._promote(table.patterns(touched & (table.count >= self.min_count)))

    def _insert_candidate(self, p: int) -> np.ndarray:
        """Count ``p`` into the candidate table; returns the slots whose count changed."""
        table = self._table
        if self.literal and p in table:
            slot = table.slot_of[p]
            table.count[slot] += 1
            touched = np.zeros_like(table.live)
            touched[slot] = True
            return touched

        touched = table.subsets(p)
        table.count[touched] += 1
        if p in table:
            table.mult[table.slot_of[p]] += 1
            return touched
        weights = table.count if self.literal else table.mult
        above = int(weights[table.supersets(p)].sum())
        table.add(p, 1 + above, 1)
        if len(touched) < len(table.live):
            touched = np.concatenate([touched, np.zeros(len(table.live) - len(touched), dtype=bool)])
        touched[table.slot_of[p]] = True
        return touched

    def _promote(self, ready: Iterable[int]) -> None:
        for x in sorted(set(ready), key=_promotion_key):
            count = self._table.remove(x)
            if x in self.mf or self.under_mf(x):
                continue
            for y in [y for y in self.mf if y & ~x == 0]:
                del self.mf[y]
            self.mf[x] = count

    def promote_and_prune(self) -> None:
        """Move every candidate at or above threshold into ``mf``, pruning its subsets there."""
        self._promote(m for m, c in self.mfc.items() if c >= self.min_count)

    # -- final step ----------------------------------------------------------

    def estimate_support(self, pattern: Sequence[int] | int) -> int:
        """Support of ``pattern`` as seen through the candidate table.

        Counts every processed transaction whose projection reached the
        candidate table and contains ``pattern``.  Exact for any pattern not
        contained in an ``mf`` entry.
        """
        q = pattern if isinstance(pattern, int) else to_mask(pattern)
        table = self._table
        weights = table.count if self.literal else table.mult
        return int(weights[table.supersets(q)].sum())

    def derive_common_patterns(self) -> None:
        """Recover maximal itemsets shared by several candidate patterns.

        Every frequent pattern in the pairwise-intersection closure of the
        candidate table that is not already covered by ``mf`` is added, and
        ``mf`` is reduced back to an antichain.  The closure is walked only
        through its frequent members (closed-itemset enumeration over the
        candidate patterns weighted by multiplicity), which yields the same
        frequent members as the naive fixpoint of
        :func:`intersection_closure`.
        """
        self.promote_and_prune()
        if self.literal:
            derived = self._derive_literal()
        else:
            rows = [(m, k) for m, _, k in self._table.items() if not self.under_mf(m)]
            derived = frequent_closed_patterns(rows, self.min_count)
        for q, support in sorted(derived, key=lambda qs: _promotion_key(qs[0])):
            if not q or q in self.mf or q in self._table or self.under_mf(q):
                continue
            self.mf[q] = support
        for y in list(self.mf):
            if any(y != z and y & ~z == 0 for z in self.mf):
                del self.mf[y]

    def _derive_literal(self) -> list[tuple[int, int]]:
        pats = list(self._table.slot_of)
        out = {}
        for n, a in enumerate(pats):
            for b in pats[n + 1:]:
                q = a & b
                if q and q not in self._table:
                    est = self.estimate_support(q)
                    if est >= self.min_count:
                        out[q] = est
        return list(out.items())


def intersection_closure(patterns: Iterable[Sequence[int]]) -> set[Itemset]:
    """Fixpoint of pairwise intersection over ``patterns`` (the inputs included).

    Quadratic per round and potentially exponential overall; a reference for
    small inputs.
    """
    current = {to_mask(p) for p in patterns}
    while True:
        items = list(current)
        new = {a & b for n, a in enumerate(items) for b in items[n + 1:]} - current
        if not new:
            return {from_mask(m) for m in current}
        current |= new


def frequent_closed_patterns(rows: Sequence[tuple[int, int]], min_count: int) -> list[tuple[int, int]]:
    """Closed patterns of a weighted pattern database with weight >= ``min_count``.

    ``rows`` are ``(item_mask, weight)`` pairs.  Uses prefix-preserving
    closure extension, so each closed set is produced exactly once.  Each row
    occupies ``weight`` consecutive bits of the row space so that supports
    are plain popcounts.
    """
    universe = 0
    cover: dict[int, int] = {}
    offset = 0
    for mask, weight in rows:
        if weight <= 0:
            continue
        span = ((1 << weight) - 1) << offset
        offset += weight
        universe |= mask
        for i in iter_bits(mask):
            cover[i] = cover.get(i, 0) | span
    everything = (1 << offset) - 1
    if offset < min_count:
        return []
    items = sorted(cover)

    def closure(rs: int) -> int:
        c = 0
        for i in items:
            if cover[i] & rs == rs:
                c |= 1 << i
        return c

    out: list[tuple[int, int]] = []
    root = closure(everything)
    if root:
        out.append((root, offset))

    stack = [(root, everything, -1)]
    while stack:
        pat, rs, core = stack.pop()
        for i in items:
            if i <= core or pat >> i & 1:
                continue
            rs2 = rs & cover[i]
            support = rs2.bit_count()
            if support < min_count:
                continue
            q = closure(rs2)
            low = (1 << i) - 1
            if q & low != pat & low:
                continue
            out.append((q, support))
            stack.append((q, rs2, i))
    return out


SegmentHook = Callable[[int, MinerState], None]


def mine(
    source: TransactionSource,
    threshold: SupportThreshold,
    requested_segments: int | None = None,
    *,
    exact_counts: bool = False,
    order: Sequence[int] | None = None,
    on_segment: SegmentHook | None = None,
    literal: bool = False,
) -> MiningResult:
    """Mine the maximal frequent itemsets of ``source`` in two passes.

    ``order`` forces a segment visiting order instead of the horizontal-count
    priority; ``on_segment(index, state)`` is called after each segment of
    pass 2.  With ``exact_counts`` a third pass replaces the table counters
    with true supports.
    """
    start = time.perf_counter()
    n = len(source)
    min_count = resolve_threshold(threshold, n)
    plan = plan_segments(n, threshold, requested_segments)

    isvs = scan_isvs(source, plan)
    frequent = frequent_items(isvs, min_count)
    priority = prioritize(horizontal_counts(isvs, frequent))
    visit = _visit_order(plan, priority, order)

    state = MinerState(frequent, min_count, literal=literal)
    keep = state.frequent
    rows = source.scan([plan.bounds[s] for s in visit])
    for seg in visit:
        for _ in range(plan.bounds[seg][1]):
            state.process_pattern(to_mask(next(rows).items) & keep)
        if on_segment is not None:
            on_segment(seg, state)
    for _ in rows:
        pass

    state.derive_common_patterns()
    mfs = {from_mask(m): c for m, c in state.mf.items()}
    if exact_counts:
        mfs = exact_supports(source, mfs)
    return MiningResult(
        algorithm="seg",
        mfs=mfs,
        passes=source.pass_count,
        patterns_processed=state.processed,
        elapsed_ms=(time.perf_counter() - start) * 1000,
        exact_counts=exact_counts,
    )


def _visit_order(plan: SegmentPlan, priority: SegmentPriority, order: Sequence[int] | None) -> list[int]:
    if order is None:
        return list(priority.order)
    if sorted(order) != list(range(plan.num_segments)):
        raise ValueError(f"order {list(order)} is not a permutation of {plan.num_segments} segments")
    return list(order)


def exact_supports(source: TransactionSource, itemsets: Iterable[Itemset]) -> dict[Itemset, int]:
    """True supports of ``itemsets`` in one pass."""
    masks = {items: to_mask(items) for items in itemsets}
    counts = dict.fromkeys(masks, 0)
    for t in source.scan():
        tm = to_mask(t.items)
        for items, m in masks.items():
            if m & ~tm == 0:
                counts[items] += 1
    return counts
