from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from maxseg.core import SupportThreshold, TransactionSource, support_count
from maxseg.datagen import generate_random_small
from maxseg.oracle import all_frequent, oracle_mfs
from maxseg.pincer import generate_candidates, pincer_mine, prune_and_recover, update_mfcs

from conftest import L, lettered


def maximal_avoiding(universe, infrequent):
    """Brute force: maximal subsets of ``universe`` containing no ``infrequent`` set."""
    ok = [set(c) for k in range(len(universe) + 1) for c in combinations(universe, k)
          if not any(set(s) <= set(c) for s in infrequent)]
    return {tuple(sorted(c)) for c in ok if not any(c < d for d in ok)}


def test_update_mfcs_splits_on_infrequent_pair():
    got = update_mfcs([L("abcde")], L("be"))
    assert got == {L("acde"), L("abcd")}
    assert got == maximal_avoiding(L("abcde"), [L("be")])


def test_update_mfcs_leaves_disjoint_elements():
    assert update_mfcs([L("abc"), L("de")], L("de")) == {L("abc"), L("d"), L("e")}
    assert update_mfcs([L("abc")], L("de")) == {L("abc")}


def test_update_mfcs_chain_on_table1():
    mfcs = {L("abcde")}
    pairs = [L("be"), L("ce"), L("de")]
    for s in pairs:
        mfcs = update_mfcs(mfcs, s)
    assert mfcs == {L("abcd"), L("ae")}
    assert mfcs == maximal_avoiding(L("abcde"), pairs)


def test_update_mfcs_rejects_empty():
    with pytest.raises(ValueError):
        update_mfcs([L("ab")], ())


@settings(max_examples=200, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 5), min_size=1, max_size=3), max_size=6))
def test_update_mfcs_matches_enumeration(infrequent):
    universe = tuple(range(6))
    mfcs = {universe}
    for s in infrequent:
        mfcs = update_mfcs(mfcs, sorted(s))
    expected = maximal_avoiding(universe, [sorted(s) for s in infrequent])
    assert mfcs == {e for e in expected if e}


@pytest.mark.parametrize("level, expected", [
    ([L("a"), L("b"), L("c")], {L("ab"), L("ac"), L("bc")}),
    ([L("ab"), L("ac"), L("bc")], {L("abc")}),
    ([L("ab"), L("cd")], set()),
    ([L("ab"), L("ac")], set()),
])
def test_generate_candidates(level, expected):
    assert generate_candidates(level) == expected


def test_prune_candidates_under_mfs():
    to_count, _ = prune_and_recover({L("ab"), L("ae")}, [L("abcd")], [])
    assert to_count == {L("ae")}
    to_count, restored = prune_and_recover({L("ab"), L("ae")}, [], [L("a"), L("b")])
    assert to_count == {L("ab"), L("ae")} and restored == set()


def test_recovery_restores_needed_join_partners():
    # ab and ac lie under two different maximal sets, yet abc is outside both
    level = [L("ab"), L("ac"), L("bc")]
    _, restored = prune_and_recover([], [L("abd"), L("ace")], level)
    assert restored == {L("ab"), L("ac")}
    _, restored = prune_and_recover([], [L("abc")], level)
    assert restored == set()


def test_pincer_table1(table1):
    result = pincer_mine(table1, SupportThreshold.absolute(3))
    assert lettered(result.mfs) == {"abcd": 3, "ae": 3}
    assert result.exact_counts


def test_pincer_table1_min4(table1):
    assert lettered(pincer_mine(table1, SupportThreshold.absolute(4)).mfs) == {"abc": 6, "ad": 4}


def test_pincer_single_transaction():
    source = TransactionSource([[2, 5, 7]])
    assert pincer_mine(source, SupportThreshold.absolute(1)).mfs == {(2, 5, 7): 1}


def test_pincer_nothing_frequent(table1):
    assert pincer_mine(table1, SupportThreshold.absolute(9)).mfs == {}


def test_pincer_trace_reaches_mfcs_equal_mfs(table1):
    trace = []
    pincer_mine(table1, SupportThreshold.absolute(3), trace=trace)
    assert trace[0]["mfcs"] == [L("abcde")]
    assert trace[-1]["mfcs"] == trace[-1]["mfs"] == sorted([L("abcd"), L("ae")])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_pincer_differential_against_oracle(seed):
    source, threshold = generate_random_small(seed)
    expected = oracle_mfs(source, threshold)
    trace = []
    result = pincer_mine(source.snapshot(), threshold, trace=trace)
    assert result.mfs == expected
    assert set(pincer_mine(source.snapshot(), threshold, recovery=False).mfs) == set(expected)
    longest = max((len(s) for s in expected), default=0)
    assert result.passes <= longest + 1
    # every frequent itemset stays under some MFCS element after each pass
    catalog = all_frequent(source, threshold)
    for step in trace:
        for s in catalog:
            assert any(set(s) <= set(e) for e in step["mfcs"])
    assert trace[-1]["mfcs"] == trace[-1]["mfs"]


def test_pincer_counts_are_supports(table1):
    result = pincer_mine(table1, SupportThreshold.absolute(2))
    for items, count in result.mfs.items():
        assert count == support_count(table1.snapshot(), items)
