from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from maxseg.core import (
    SupportThreshold,
    Transaction,
    TransactionSource,
    read_transactions,
    resolve_threshold,
    to_mask,
)
from maxseg.datagen import generate_random_small
from maxseg.oracle import oracle_mfs
from maxseg.segment_miner import (
    MinerState,
    frequent_closed_patterns,
    intersection_closure,
    mine,
    project,
)

from conftest import L, lettered

FIXTURES = Path(__file__).parent / "fixtures"


def brute_mfs(rows, min_count):
    """Maximal frequent itemsets by trying every itemset over the items present."""
    universe = sorted({i for r in rows for i in r})
    frequent = []
    for k in range(1, len(universe) + 1):
        for combo in combinations(universe, k):
            if sum(1 for r in rows if set(combo) <= set(r)) >= min_count:
                frequent.append(frozenset(combo))
    return {tuple(sorted(f)) for f in frequent if not any(f < g for g in frequent)}


@pytest.mark.parametrize("items, expected", [
    (L("adegj"), L("ade")),
    (L("j"), ()),
    (L("abcdfi"), L("abcd")),
])
def test_project(items, expected):
    assert project(Transaction(1, items), L("abcde")) == expected


def test_worked_example_checkpoints(table1):
    seen = []
    mine(table1, SupportThreshold.absolute(3), 3,
         on_segment=lambda seg, state: seen.append((seg, *map(lettered, state.tables()))))
    assert seen == [
        (1, {"abc": 3}, {"abcd": 2}),
        (0, {"abc": 4}, {"ade": 1, "abce": 1, "abcd": 2}),
        (2, {"abcd": 3}, {"ade": 1, "abce": 2}),
    ]


def test_table1_result_and_two_passes(table1):
    result = mine(table1, SupportThreshold.absolute(3))
    assert lettered(result.mfs) == {"abcd": 3, "ae": 3}
    assert result.passes == table1.pass_count == 2


def test_table1_min4_matches_brute_force(table1):
    rows = [t.items for t in table1.transactions]
    expected = brute_mfs(rows, 4)
    assert expected == {L("abc"), L("ad")}
    assert set(mine(table1, SupportThreshold.absolute(4)).mfs) == expected


def test_empty_dataset():
    source = TransactionSource([])
    result = mine(source, SupportThreshold.absolute(1))
    assert result.mfs == {}
    assert source.pass_count == 2


def test_exact_counts_costs_one_more_pass(table1):
    result = mine(table1, SupportThreshold.absolute(4), exact_counts=True)
    assert lettered(result.mfs) == {"abc": 6, "ad": 4}
    assert result.passes == 3


def test_forced_order_must_be_a_permutation(table1):
    with pytest.raises(ValueError):
        mine(table1, SupportThreshold.absolute(3), 3, order=[0, 0, 1])


def test_promote_prunes_subsets_in_mf():
    state = MinerState.from_tables(L("abcd"), 3, mf={L("abc"): 5}, mfc={L("abcd"): 3})
    state.promote_and_prune()
    assert tuple(map(lettered, state.tables())) == ({"abcd": 3}, {})


def test_promote_below_threshold_is_noop():
    state = MinerState.from_tables(L("abcd"), 3, mf={L("abc"): 5}, mfc={L("abcd"): 2})
    state.promote_and_prune()
    assert tuple(map(lettered, state.tables())) == ({"abc": 5}, {"abcd": 2})


def test_promote_nested_keeps_only_superset():
    state = MinerState.from_tables(L("abc"), 3, mfc={L("ab"): 3, L("abc"): 3})
    state.promote_and_prune()
    assert tuple(map(lettered, state.tables())) == ({"abc": 3}, {})
    # the same tables arise from abc, abc, abc where the oracle agrees
    rows = [L("abc")] * 3
    assert brute_mfs(rows, 3) == {L("abc")}


def test_derive_common_patterns_example():
    state = MinerState.from_tables(L("abcde"), 3, mf={L("abcd"): 3}, mfc={L("ade"): 1, L("abce"): 2})
    state.derive_common_patterns()
    assert lettered(state.tables()[0]) == {"abcd": 3, "ae": 3}


def test_derive_single_pattern_adds_nothing():
    state = MinerState.from_tables(L("abc"), 3, mfc={L("abc"): 2})
    state.derive_common_patterns()
    assert state.tables()[0] == {}


def test_nested_estimate_counts_each_transaction_once():
    # abcd, abc, abc fed with min 4 leaves mfc = {abcd: 1, abc: 3}
    rows = [L("abcd"), L("abc"), L("abc")]
    state = MinerState(L("abcd"), 4)
    for r in rows:
        state.process_pattern(r)
    assert lettered(state.tables()[1]) == {"abcd": 1, "abc": 3}
    truth = sum(1 for r in rows if set(L("ab")) <= set(r))
    assert state.estimate_support(L("ab")) == truth == 3
    rebuilt = MinerState.from_tables(L("abcd"), 4, mfc={L("abc"): 3, L("abcd"): 1})
    assert rebuilt.estimate_support(L("ab")) == 3


def test_infrequent_items_rejected():
    state = MinerState(L("ab"), 2)
    with pytest.raises(ValueError):
        state.process_pattern(L("abc"))


def test_empty_pattern_is_noop():
    state = MinerState(L("ab"), 2)
    state.process_pattern(())
    assert state.processed == 0 and state.tables() == ({}, {})


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_count_invariant_and_antichain_on_replay(seed):
    source, threshold = generate_random_small(seed)
    rows = [t.items for t in source.transactions]
    min_count = resolve_threshold(threshold, len(source))
    isv_frequent = sorted({i for r in rows for i in r if sum(i in s for s in rows) >= min_count})
    state = MinerState(isv_frequent, min_count)
    reached = []
    for r in rows:
        p = project(r, isv_frequent)
        if p and not state.under_mf(to_mask(p)):
            reached.append(set(p))
        state.process_pattern(p)
        mf, mfc = state.tables()
        for x, count in mfc.items():
            assert count == sum(1 for q in reached if set(x) <= q)
        assert not set(mf) & set(mfc)
        assert all(c >= state.min_count for c in mf.values())
        for a in mf:
            assert not any(a != b and set(a) <= set(b) for b in mf)


def test_literal_rules_counterexample():
    source = read_transactions(FIXTURES / "literal_counterexample.dat")
    threshold = SupportThreshold.absolute(3)
    truth = set(oracle_mfs(source, threshold))
    assert truth == {(0,), (1,)}
    assert set(mine(source.snapshot(), threshold, 1, literal=True).mfs) == {(1,)}
    assert set(mine(source.snapshot(), threshold, 1).mfs) == truth


pattern_dbs = st.lists(
    st.tuples(st.frozensets(st.integers(0, 6), min_size=1, max_size=5), st.integers(1, 3)),
    min_size=1, max_size=8, unique_by=lambda r: r[0],
)


@settings(max_examples=200, deadline=None)
@given(pattern_dbs, st.integers(1, 8))
def test_closed_enumeration_matches_pairwise_closure(rows, min_count):
    closure = intersection_closure(sorted(p) for p, _ in rows)

    def weight(q):
        return sum(w for p, w in rows if set(q) <= p)

    expected = {q: weight(q) for q in closure if q and weight(q) >= min_count}
    got = frequent_closed_patterns([(to_mask(p), w) for p, w in rows], min_count)
    got = {tuple(i for i in range(7) if m >> i & 1): s for m, s in got}
    assert got == expected


def test_intersection_closure_small():
    assert intersection_closure([L("ade"), L("abce")]) == {L("ade"), L("abce"), L("ae")}
