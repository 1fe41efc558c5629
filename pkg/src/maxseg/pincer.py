"""Pincer search: bottom-up Apriori combined with a top-down candidate set.

The top-down half keeps the Maximum Frequent Candidate Set (MFCS), an
antichain whose subsets cover every itemset not yet known to be infrequent.
Each pass counts the bottom-up candidates together with the MFCS elements;
frequent MFCS elements become maximal frequent itemsets (MFS) and spare the
bottom-up search from counting their subsets, while infrequent bottom-up
candidates shrink the MFCS.
"""

from __future__ import annotations

import time
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .core import (
    Itemset,
    MiningResult,
    SupportThreshold,
    TransactionSource,
    from_mask,
    iter_bits,
    resolve_threshold,
    to_mask,
)


def _antichain(masks: Iterable[int]) -> set[int]:
    """Drop every mask that is a strict subset of another."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda m: -m.bit_count()):
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return set(kept)


def _update_mfcs(mfcs: set[int], infrequent: int) -> set[int]:
    hit = [y for y in mfcs if infrequent & ~y == 0]
    if not hit:
        return mfcs
    out = mfcs.difference(hit)
    for y in hit:
        for e in iter_bits(infrequent):
            shrunk = y & ~(1 << e)
            if shrunk and not any(shrunk & ~z == 0 for z in out):
                out.add(shrunk)
    return _antichain(out)


def update_mfcs(mfcs: Iterable[Sequence[int]], infrequent: Sequence[int]) -> set[Itemset]:
    """Shrink every MFCS element containing ``infrequent`` by one item of it at a time."""
    if not infrequent:
        raise ValueError("infrequent itemset must be non-empty")
    result = _update_mfcs({to_mask(m) for m in mfcs}, to_mask(infrequent))
    return {from_mask(m) for m in result}


def generate_candidates(level: Iterable[Sequence[int]]) -> set[Itemset]:
    """Apriori join of k-itemsets sharing a (k-1)-prefix, then subset-infrequency pruning."""
    frequent = {tuple(x) for x in level}
    return _join(sorted(frequent), frequent, lambda s: False)


def _join(ordered: Sequence[Itemset], known_frequent, frequent_elsewhere) -> set[Itemset]:
    out = set()
    for n, a in enumerate(ordered):
        for b in ordered[n + 1:]:
            if a[:-1] != b[:-1]:
                break
            cand = a + (b[-1],)
            if _all_subsets_ok(cand, known_frequent, frequent_elsewhere):
                out.add(cand)
    return out


def _all_subsets_ok(cand: Itemset, known_frequent, frequent_elsewhere) -> bool:
    for drop in range(len(cand)):
        sub = cand[:drop] + cand[drop + 1:]
        if sub not in known_frequent and not frequent_elsewhere(sub):
            return False
    return True


def prune_and_recover(
    candidates: Iterable[Sequence[int]],
    mfs: Iterable[Sequence[int]],
    level: Iterable[Sequence[int]] = (),
) -> tuple[set[Itemset], set[Itemset]]:
    """Split off candidates known frequent via ``mfs`` and recover join partners.

    Returns ``(to_count, restored)``.  ``to_count`` drops candidates lying
    under a known maximal frequent itemset; they are frequent for free.
    ``restored`` lists the members of ``level`` (frequent k-itemsets) that lie
    under ``mfs`` yet must stay available for the next join because they
    pair with some member of ``level`` to form a candidate outside ``mfs``.
    Joining over the un-pruned members plus ``restored`` therefore produces
    every uncovered candidate plain Apriori would.
    """
    mfs_masks = [to_mask(m) for m in mfs]

    def covered(items) -> bool:
        m = to_mask(items)
        return any(m & ~x == 0 for x in mfs_masks)

    to_count = {tuple(c) for c in candidates if not covered(c)}
    ordered = sorted({tuple(x) for x in level})
    restored = set()
    for n, a in enumerate(ordered):
        for b in ordered[n + 1:]:
            if a[:-1] != b[:-1]:
                break
            if not covered(a + (b[-1],)):
                restored.update(x for x in (a, b) if covered(x))
    return to_count, restored


def _count(source: TransactionSource, candidates: dict[Itemset, int], k: int | None, extra: dict[int, int]) -> None:
    """One pass: supports of ``candidates`` (all of length ``k``) and of ``extra`` masks."""
    cand_masks = {to_mask(c): c for c in candidates}
    for t in source.scan():
        tm = to_mask(t.items)
        if cand_masks:
            if comb(len(t.items), k) <= len(cand_masks):
                for sub in combinations(t.items, k):
                    if sub in candidates:
                        candidates[sub] += 1
            else:
                for m, c in cand_masks.items():
                    if m & ~tm == 0:
                        candidates[c] += 1
        for m in extra:
            if m & ~tm == 0:
                extra[m] += 1


def pincer_mine(
    source: TransactionSource,
    threshold: SupportThreshold,
    *,
    recovery: bool = True,
    trace: list | None = None,
) -> MiningResult:
    """Run Pincer search; reported counts are exact supports.

    With ``recovery=False`` the MFS pruning of the bottom-up side is disabled
    (plain Apriori plus the top-down MFCS), which is the reference the
    recovery procedure must agree with.  ``trace``, if given, receives one
    dict per pass with the MFCS, MFS and candidate counts.
    """
    start = time.perf_counter()
    min_count = resolve_threshold(threshold, len(source))

    singles: dict[Itemset, int] = {}
    for t in source.scan():
        for i in t.items:
            singles[(i,)] = singles.get((i,), 0) + 1
    level = {c for c, n in singles.items() if n >= min_count}
    known: dict[int, int] = {to_mask(c): n for c, n in singles.items()}

    mfcs: set[int] = {to_mask(i for (i,) in level)} if level else set()
    mfs: set[int] = set()
    k = 1

    def under_mfs(items: Itemset) -> bool:
        m = to_mask(items)
        return any(m & ~x == 0 for x in mfs)

    def classify_mfcs() -> None:
        for e in mfcs:
            if e in known and known[e] >= min_count:
                mfs.add(e)

    classify_mfcs()
    _record(trace, k, mfcs, mfs, len(singles))
    while True:
        cands = _join(sorted(level), level, lambda s: False)
        free = set()
        if recovery:
            free = {c for c in cands if under_mfs(c)}
            cands -= free
        cands = {c for c in cands if any(to_mask(c) & ~e == 0 for e in mfcs)}
        pending = {e: 0 for e in mfcs if e not in known and e not in mfs}
        if not cands and not pending:
            break

        k += 1
        tally = dict.fromkeys(cands, 0)
        _count(source, tally, k, pending)
        for c, n in tally.items():
            known[to_mask(c)] = n
        known.update(pending)

        level = {c for c, n in tally.items() if n >= min_count} | free
        for c, n in sorted(tally.items()):
            if n < min_count:
                mfcs = _update_mfcs(mfcs, to_mask(c))
        classify_mfcs()
        _record(trace, k, mfcs, mfs, len(tally) + len(pending))

    mfs_items = {from_mask(m): known[m] for m in mfs}
    return MiningResult(
        algorithm="pincer",
        mfs=mfs_items,
        passes=source.pass_count,
        elapsed_ms=(time.perf_counter() - start) * 1000,
        exact_counts=True,
    )


def _record(trace, k, mfcs, mfs, counted) -> None:
    if trace is not None:
        trace.append({
            "pass": k,
            "mfcs": sorted(from_mask(m) for m in mfcs),
            "mfs": sorted(from_mask(m) for m in mfs),
            "counted": counted,
        })
