"""Exact reference miners used to arbitrate the fast algorithms.

Two deliberately independent routes produce the frequent-itemset catalog:

* ``levelwise`` -- textbook Apriori over frozensets;
* ``powerset`` -- counts every subset of the item universe against bitmask
  transactions with numpy, so it is limited to small universes.

Neither touches the other's code, so they can check each other.
"""

from __future__ import annotations

import time
from itertools import combinations

import numpy as np

from .core import Itemset, MiningResult, SupportThreshold, TransactionSource, resolve_threshold

POWERSET_MAX_ITEMS = 24

FrequentCatalog = dict[Itemset, int]


class UniverseTooLarge(ValueError):
    pass


def all_frequent(
    source: TransactionSource, threshold: SupportThreshold, mode: str = "levelwise"
) -> FrequentCatalog:
    """Every itemset with support >= the resolved threshold, with exact supports."""
    min_count = resolve_threshold(threshold, len(source))
    rows = [t.items for t in source.transactions]
    if mode == "levelwise":
        return _levelwise(rows, min_count)
    if mode == "powerset":
        return _powerset(rows, min_count, source.num_items())
    raise ValueError(f"unknown oracle mode {mode!r}")


def _levelwise(rows: list[Itemset], min_count: int) -> FrequentCatalog:
    baskets = [frozenset(r) for r in rows]
    counts: dict[frozenset, int] = {}
    for b in baskets:
        for item in b:
            key = frozenset([item])
            counts[key] = counts.get(key, 0) + 1
    level = {s for s, c in counts.items() if c >= min_count}
    catalog = {s: counts[s] for s in level}
    k = 1
    while level:
        k += 1
        candidates = set()
        for a in level:
            for b in level:
                u = a | b
                if len(u) == k and all(u - {x} in level for x in u):
                    candidates.add(u)
        tally = dict.fromkeys(candidates, 0)
        for b in baskets:
            for c in candidates:
                if c <= b:
                    tally[c] += 1
        level = {c for c, n in tally.items() if n >= min_count}
        catalog.update((c, tally[c]) for c in level)
    return {tuple(sorted(s)): c for s, c in catalog.items()}


def _powerset(rows: list[Itemset], min_count: int, num_items: int) -> FrequentCatalog:
    if num_items > POWERSET_MAX_ITEMS:
        raise UniverseTooLarge(
            f"powerset mode supports at most {POWERSET_MAX_ITEMS} items, got {num_items}"
        )
    tx = np.zeros(len(rows), dtype=np.int64)
    for n, r in enumerate(rows):
        for item in r:
            tx[n] |= 1 << item
    catalog = {}
    total = 1 << num_items
    chunk = max(1, min(total, (1 << 22) // max(len(rows), 1)))
    for lo in range(1, total, chunk):
        cands = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        supports = ((tx[:, None] & cands[None, :]) == cands[None, :]).sum(axis=0)
        for cand, support in zip(cands[supports >= min_count].tolist(), supports[supports >= min_count].tolist()):
            catalog[tuple(i for i in range(num_items) if cand >> i & 1)] = int(support)
    return catalog


def maximal(catalog: FrequentCatalog) -> dict[Itemset, int]:
    """Members of ``catalog`` with no proper superset in it."""
    sets = {s: frozenset(s) for s in catalog}
    by_len = sorted(catalog, key=len, reverse=True)
    out: dict[Itemset, int] = {}
    for s in by_len:
        if not any(len(m) > len(s) and sets[s] < frozenset(m) for m in out):
            out[s] = catalog[s]
    return out


def oracle_mfs(
    source: TransactionSource, threshold: SupportThreshold, mode: str = "levelwise"
) -> dict[Itemset, int]:
    return maximal(all_frequent(source, threshold, mode))


def oracle_mine(source: TransactionSource, threshold: SupportThreshold, mode: str = "levelwise") -> MiningResult:
    """Oracle wrapped as a :class:`MiningResult` for the CLI and benches."""
    start = time.perf_counter()
    mfs = oracle_mfs(source, threshold, mode)
    return MiningResult(
        algorithm=f"oracle-{mode}",
        mfs=mfs,
        passes=0,
        elapsed_ms=(time.perf_counter() - start) * 1000,
        exact_counts=True,
    )


def proper_subsets(itemset: Itemset):
    """All non-empty proper subsets; there are 2^m - 2 of them."""
    for k in range(1, len(itemset)):
        yield from combinations(itemset, k)
