"""Synthetic market-basket data in the T<avg len>.I<pattern len>.D<count> naming scheme.

A simplified Quest-style generator: a pool of base patterns is drawn once,
then every transaction is assembled from randomly picked patterns until its
target length is reached, with a fraction of slots replaced by noise items.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import SupportThreshold, TransactionSource, itemset_from_items


@dataclass(frozen=True)
class GenConfig:
    avg_transaction_len: int = 10
    avg_pattern_len: int = 3
    num_transactions: int = 10_000
    num_items: int = 100
    num_base_patterns: int = 20
    noise_prob: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.avg_pattern_len <= self.avg_transaction_len <= self.num_items:
            raise ValueError("need 1 <= avg_pattern_len <= avg_transaction_len <= num_items")
        if self.num_transactions < 0:
            raise ValueError("num_transactions must be non-negative")
        if not 0.0 <= self.noise_prob <= 1.0:
            raise ValueError("noise_prob must be in [0, 1]")
        if self.num_base_patterns < 1:
            raise ValueError("num_base_patterns must be at least 1")

    @property
    def name(self) -> str:
        return f"T{self.avg_transaction_len}.I{self.avg_pattern_len}.D{_short(self.num_transactions)}"


def _short(n: int) -> str:
    return f"{n // 1000}K" if n >= 1000 and n % 1000 == 0 else str(n)


def generate(config: GenConfig) -> TransactionSource:
    rng = np.random.default_rng(config.seed)
    n = config.num_items

    sizes = np.clip(rng.poisson(config.avg_pattern_len, config.num_base_patterns), 1, n)
    patterns = [rng.choice(n, size=int(s), replace=False) for s in sizes]
    # skewed pattern popularity, as in Quest's exponentially weighted pool
    weights = rng.exponential(1.0, config.num_base_patterns)
    weights /= weights.sum()

    lengths = np.clip(rng.poisson(config.avg_transaction_len, config.num_transactions), 1, n)
    rows = []
    for target in lengths:
        items: set[int] = set()
        # bounded: a run of picks that add nothing must not spin forever
        for _ in range(4 * int(target)):
            if len(items) >= target:
                break
            for item in patterns[rng.choice(config.num_base_patterns, p=weights)]:
                if len(items) >= target:
                    break
                if rng.random() < config.noise_prob:
                    item = rng.integers(n)
                items.add(int(item))
        while len(items) < target:
            items.add(int(rng.integers(n)))
        rows.append(itemset_from_items(items))
    return TransactionSource(rows)


def generate_random_small(seed: int) -> tuple[TransactionSource, SupportThreshold]:
    """A tiny instance for property tests: <= 10 items, <= 50 transactions, 10-60% support."""
    r = random.Random(seed)
    n_items = r.randint(1, 10)
    n_tx = r.randint(1, 50)
    patterns = [r.sample(range(n_items), r.randint(1, n_items)) for _ in range(r.randint(1, 4))]
    density = r.choice([0.05, 0.15, 0.3])
    rows = []
    for _ in range(n_tx):
        t = set()
        for p in patterns:
            if r.random() < 0.45:
                t.update(x for x in p if r.random() < 0.9)
        t.update(i for i in range(n_items) if r.random() < density)
        rows.append(sorted(t))
    return TransactionSource(rows), SupportThreshold.percentage(r.randint(10, 60))
