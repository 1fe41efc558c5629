"""Timing harness comparing the miners across datasets and support levels."""

from __future__ import annotations

import hashlib
import logging
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import Itemset, MiningResult, SupportThreshold, TransactionSource
from .oracle import oracle_mine
from .pincer import pincer_mine
from .segment_miner import mine

log = logging.getLogger(__name__)

ALGORITHMS = ("seg", "pincer", "oracle")
CSV_HEADER = "algo,dataset,support_pct,ms,mfs_count,checksum"


def run_algorithm(
    name: str,
    source: TransactionSource,
    threshold: SupportThreshold,
    *,
    segments: int | None = None,
    exact_counts: bool = False,
) -> MiningResult:
    if name == "seg":
        return mine(source, threshold, segments, exact_counts=exact_counts)
    if name == "pincer":
        return pincer_mine(source, threshold)
    if name == "oracle":
        return oracle_mine(source, threshold)
    raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")


def mfs_checksum(itemsets: Iterable[Itemset]) -> str:
    """Order-independent digest of a set of itemsets."""
    canon = "\n".join(" ".join(map(str, s)) for s in sorted(set(map(tuple, itemsets))))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class BenchRow:
    algo: str
    dataset: str
    support_pct: float
    ms: float
    mfs_count: int
    checksum: str


class ChecksumMismatch(RuntimeError):
    pass


def run_benchmark(
    datasets: Mapping[str, TransactionSource],
    algorithms: Sequence[str] = ("seg", "pincer"),
    supports: Sequence[float] = (10, 20, 30, 40, 50),
    repetitions: int = 3,
    *,
    strict: bool = False,
) -> list[BenchRow]:
    """Time every (dataset, support, algorithm) cell; the median over repetitions is reported.

    All algorithms in a cell must return the same itemset set.  A
    disagreement is logged, and raises :class:`ChecksumMismatch` when
    ``strict``.  Use :func:`mismatches` to find them afterwards.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    rows = []
    for name, source in datasets.items():
        for pct in supports:
            threshold = SupportThreshold.percentage(pct)
            cell = []
            for algo in algorithms:
                times, result = [], None
                for _ in range(repetitions):
                    fresh = source.snapshot()
                    t0 = time.perf_counter()
                    result = run_algorithm(algo, fresh, threshold)
                    times.append((time.perf_counter() - t0) * 1000)
                cell.append(BenchRow(
                    algo, name, float(pct), statistics.median(times),
                    len(result.mfs), mfs_checksum(result.mfs),
                ))
            if len({r.checksum for r in cell}) > 1:
                detail = ", ".join(f"{r.algo}={r.checksum}" for r in cell)
                log.error("result mismatch on %s at %g%%: %s", name, pct, detail)
                if strict:
                    raise ChecksumMismatch(f"{name} at {pct}%: {detail}")
            rows.extend(cell)
    return rows


def mismatches(rows: Iterable[BenchRow]) -> list[tuple[str, float]]:
    cells: dict[tuple[str, float], set[str]] = {}
    for r in rows:
        cells.setdefault((r.dataset, r.support_pct), set()).add(r.checksum)
    return [cell for cell, sums in cells.items() if len(sums) > 1]


def _ordered(rows: Iterable[BenchRow]) -> list[BenchRow]:
    return sorted(rows, key=lambda r: (r.dataset, r.support_pct, r.algo))


def emit_csv(rows: Iterable[BenchRow]) -> str:
    lines = [CSV_HEADER]
    for r in _ordered(rows):
        lines.append(f"{r.algo},{r.dataset},{r.support_pct:g},{r.ms:.3f},{r.mfs_count},{r.checksum}")
    return "\n".join(lines) + "\n"


def emit_plot_data(rows: Iterable[BenchRow]) -> str:
    """Whitespace-delimited blocks, one per dataset: support then one ms column per algorithm.

    Each block opens with a ``#`` comment naming the dataset and columns;
    blocks are separated by a blank line.
    """
    rows = _ordered(rows)
    blocks = []
    for dataset in dict.fromkeys(r.dataset for r in rows):
        mine_rows = [r for r in rows if r.dataset == dataset]
        algos = list(dict.fromkeys(r.algo for r in mine_rows))
        ms = {(r.support_pct, r.algo): r.ms for r in mine_rows}
        lines = [f"# {dataset} support_pct " + " ".join(f"{a}_ms" for a in algos)]
        for pct in sorted({r.support_pct for r in mine_rows}):
            cols = [f"{ms[(pct, a)]:.3f}" if (pct, a) in ms else "nan" for a in algos]
            lines.append(f"{pct:g} " + " ".join(cols))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def trend_summary(rows: Iterable[BenchRow], fast: str = "seg", slow: str = "pincer") -> str:
    """One line per dataset saying in how many support cells ``fast`` beat ``slow``."""
    rows = list(rows)
    out = []
    for dataset in dict.fromkeys(r.dataset for r in rows):
        ms = {(r.support_pct, r.algo): r.ms for r in rows if r.dataset == dataset}
        pcts = sorted({p for p, a in ms if (p, fast) in ms and (p, slow) in ms})
        wins = [p for p in pcts if ms[(p, fast)] < ms[(p, slow)]]
        ratios = ", ".join(f"{p:g}%: {ms[(p, fast)] / ms[(p, slow)]:.2f}" for p in pcts if ms[(p, slow)] > 0)
        out.append(f"{dataset}: {fast} faster than {slow} in {len(wins)}/{len(pcts)} cells ({fast}/{slow} time {ratios})")
    return "\n".join(out)
