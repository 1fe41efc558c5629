import pytest

from maxseg import TABLE1, TABLE1_LABELS
from maxseg.core import read_label_map, read_transactions

LETTERS = "abcdefghij"


def L(word: str) -> tuple[int, ...]:
    """'abce' -> (0, 1, 2, 4) using the a..j = 0..9 mapping of the bundled example."""
    return tuple(sorted(LETTERS.index(c) for c in word))


def W(itemset) -> str:
    return "".join(LETTERS[i] for i in itemset)


def lettered(table: dict) -> dict:
    return {W(k): v for k, v in table.items()}


@pytest.fixture
def table1():
    return read_transactions(TABLE1)


@pytest.fixture
def table1_labels():
    return read_label_map(TABLE1_LABELS)


acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion and fail on FAIL."""
    lines = request.config.stash.setdefault(acceptance_key, [])

    def check(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        lines.append((number, line))
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
