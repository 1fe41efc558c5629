"""Maximal frequent itemset mining by database segmentation."""

from importlib.resources import files

from .core import (
    Itemset,
    MiningResult,
    SupportThreshold,
    Transaction,
    TransactionSource,
    read_label_map,
    read_transactions,
    resolve_threshold,
    support_count,
)
from .oracle import oracle_mfs
from .pincer import pincer_mine
from .segment_miner import mine

# the nine-transaction example database, items a..j as ids 0..9
TABLE1 = files(__name__) / "data" / "table1.dat"
TABLE1_LABELS = files(__name__) / "data" / "table1.labels"

__all__ = [
    "Itemset",
    "MiningResult",
    "SupportThreshold",
    "TABLE1",
    "TABLE1_LABELS",
    "Transaction",
    "TransactionSource",
    "mine",
    "oracle_mfs",
    "pincer_mine",
    "read_label_map",
    "read_transactions",
    "resolve_threshold",
    "support_count",
]
