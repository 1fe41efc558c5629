"""Itemsets, transactions, thresholds and dataset I/O.

Itemsets are plain sorted tuples of non-negative integer item ids.  The
miners convert them to integer bitmasks internally, so the helpers for both
representations live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

Itemset = tuple[int, ...]


def itemset_from_items(raw: Iterable[int]) -> Itemset:
    """Sort and deduplicate ``raw`` into an itemset."""
    items = sorted(set(raw))
    if items and items[0] < 0:
        raise ValueError(f"item ids must be non-negative, got {items[0]}")
    return tuple(items)


def is_subset(a: Sequence[int], b: Sequence[int]) -> bool:
    return set(a).issubset(b)


def intersection(a: Sequence[int], b: Sequence[int]) -> Itemset:
    return tuple(sorted(set(a).intersection(b)))


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def from_mask(mask: int) -> Itemset:
    items = []
    i = 0
    while mask:
        if mask & 1:
            items.append(i)
        mask >>= 1
        i += 1
    return tuple(items)


def mask_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def sort_key(itemset: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Output order: longest first, then lexicographic."""
    return (-len(itemset), tuple(itemset))


@dataclass(frozen=True)
class Transaction:
    tid: int
    items: Itemset


class TransactionSource:
    """A replayable, ordered sequence of transactions.

    Every completed full iteration bumps :attr:`pass_count`, which is how the
    miners prove how many times they read the data.  Pass 2 of the segment
    miner visits segments out of file order; :meth:`scan` with explicit
    ``ranges`` still counts as one pass provided the ranges cover the data.
    """

    def __init__(self, transactions: Iterable[Transaction | Sequence[int]]):
        txs = []
        for n, t in enumerate(transactions, start=1):
            if not isinstance(t, Transaction):
                t = Transaction(n, itemset_from_items(t))
            txs.append(t)
        tids = [t.tid for t in txs]
        if len(set(tids)) != len(tids):
            raise ValueError("duplicate transaction ids")
        self._transactions: tuple[Transaction, ...] = tuple(txs)
        self.pass_count = 0

    def __len__(self) -> int:
        return len(self._transactions)

    def __iter__(self) -> Iterator[Transaction]:
        return self.scan()

    def scan(self, ranges: Sequence[tuple[int, int]] | None = None) -> Iterator[Transaction]:
        """Yield transactions, optionally as ``(start, length)`` blocks in the given order.

        The pass is counted only once the generator is exhausted.
        """
        if ranges is None:
            ranges = [(0, len(self._transactions))]
        for start, length in ranges:
            yield from self._transactions[start:start + length]
        self.pass_count += 1

    @property
    def transactions(self) -> tuple[Transaction, ...]:
        """Direct access that does not count as a pass (for tests and oracles)."""
        return self._transactions

    def num_items(self) -> int:
        """Size of the dense item universe, i.e. max id + 1."""
        top = -1
        for t in self._transactions:
            if t.items:
                top = max(top, t.items[-1])
        return top + 1

    def snapshot(self) -> "TransactionSource":
        """Fresh source over the same data with ``pass_count`` reset."""
        return TransactionSource(self._transactions)


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support, either an absolute count or a percentage of |D|."""

    kind: str
    value: Fraction

    def __post_init__(self):
        if self.kind not in ("absolute", "percentage"):
            raise ValueError(f"unknown threshold kind {self.kind!r}")
        if self.value <= 0:
            raise ValueError("threshold must be positive")
        if self.kind == "percentage" and self.value > 100:
            raise ValueError("percentage threshold must be in (0, 100]")
        if self.kind == "absolute" and self.value.denominator != 1:
            raise ValueError("absolute threshold must be an integer")

    @classmethod
    def absolute(cls, count: int) -> "SupportThreshold":
        return cls("absolute", Fraction(count))

    @classmethod
    def percentage(cls, pct: float | str | Fraction) -> "SupportThreshold":
        # str() keeps 33.4 as 167/5 rather than its binary float expansion
        value = pct if isinstance(pct, Fraction) else Fraction(str(pct))
        return cls("percentage", value)

    def as_percentage(self, num_transactions: int) -> Fraction:
        if self.kind == "percentage":
            return self.value
        if num_transactions <= 0:
            raise ValueError("cannot express an absolute threshold as a percentage of an empty dataset")
        return Fraction(100) * self.value / num_transactions

    def __str__(self) -> str:
        if self.kind == "absolute":
            return str(self.value)
        return f"{float(self.value):g}%"


def resolve_threshold(threshold: SupportThreshold, num_transactions: int) -> int:
    """Absolute minimum count; percentages round up so support meets the fraction."""
    if num_transactions < 0:
        raise ValueError("num_transactions must be non-negative")
    if threshold.kind == "absolute":
        count = int(threshold.value)
    else:
        count = math.ceil(threshold.value * num_transactions / 100)
    if count < 1:
        raise ValueError(
            f"threshold {threshold} resolves to {count} on {num_transactions} transactions"
        )
    return count


def support_count(source: TransactionSource, itemset: Sequence[int]) -> int:
    """Number of transactions containing ``itemset``; consumes one pass."""
    wanted = set(itemset)
    return sum(1 for t in source if wanted.issubset(t.items))


# --- file formats ---------------------------------------------------------

def parse_transactions(text: str) -> TransactionSource:
    """FIMI-style text: one transaction per line, line number is the TID."""
    txs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        try:
            ids = [int(f) for f in fields]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer item id") from exc
        if any(i < 0 for i in ids):
            raise ValueError(f"line {lineno}: negative item id")
        txs.append(Transaction(lineno, itemset_from_items(ids)))
    return TransactionSource(txs)


def format_transactions(source: TransactionSource) -> str:
    lines = [" ".join(map(str, t.items)) for t in source.transactions]
    return "".join(line + "\n" for line in lines)


def read_transactions(path: str | Path) -> TransactionSource:
    return parse_transactions(Path(path).read_text(encoding="utf-8"))


def write_transactions(source: TransactionSource, path: str | Path) -> None:
    Path(path).write_text(format_transactions(source), encoding="utf-8")


def parse_label_map(text: str) -> dict[int, str]:
    labels = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            id_, label = line.split("\t", 1)
            labels[int(id_)] = label.strip()
        except ValueError as exc:
            raise ValueError(f"label map line {lineno}: expected 'id<TAB>label'") from exc
    return labels


def read_label_map(path: str | Path) -> dict[int, str]:
    return parse_label_map(Path(path).read_text(encoding="utf-8"))


def encode_labelled(rows: Iterable[Iterable[str]]) -> tuple[TransactionSource, dict[int, str]]:
    """Build a source from label-valued transactions, assigning ids in sorted label order."""
    rows = [list(r) for r in rows]
    vocab = sorted({label for r in rows for label in r})
    ids = {label: n for n, label in enumerate(vocab)}
    source = TransactionSource([itemset_from_items(ids[x] for x in r) for r in rows])
    return source, {n: label for label, n in ids.items()}


def format_itemset(itemset: Sequence[int], labels: dict[int, str] | None = None) -> str:
    if labels:
        return " ".join(labels.get(i, str(i)) for i in itemset)
    return " ".join(map(str, itemset))


@dataclass
class MiningResult:
    """Final maximal frequent itemsets with reported counts and run statistics."""

    algorithm: str
    mfs: dict[Itemset, int]
    passes: int
    patterns_processed: int = 0
    elapsed_ms: float = 0.0
    exact_counts: bool = False

    def itemsets(self) -> frozenset[Itemset]:
        return frozenset(self.mfs)

    def sorted_items(self) -> list[tuple[Itemset, int]]:
        return sorted(self.mfs.items(), key=lambda kv: sort_key(kv[0]))

    def format(self, labels: dict[int, str] | None = None) -> str:
        return "".join(
            f"{format_itemset(items, labels)}\t{count}\n" for items, count in self.sorted_items()
        )


def iter_bits(x: int) -> Iterator[int]:
    """Indices of the set bits of ``x``, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low
