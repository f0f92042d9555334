import pytest
from gmpy2 import mpq

from katonorm import BirkhoffContext, Chart, FieldElement, PSeries, to_chart


def pq_series(dim, terms):
    """``terms`` maps exponent tuples to rationals (or field elements) in the pq chart."""
    return PSeries(dim, Chart.PQ, {0: {m: FieldElement.coerce(c) for m, c in terms.items()}})


@pytest.fixture(scope="session")
def duffing():
    ctx = BirkhoffContext((1,))
    Hi = to_chart(pq_series(1, {(4, 0): mpq(1, 4)}), Chart.XIETA)
    return ctx, Hi


@pytest.fixture(scope="session")
def henon_heiles():
    ctx = BirkhoffContext((1, 1))
    Hi = to_chart(pq_series(2, {(2, 1, 0, 0): 1, (0, 3, 0, 0): mpq(-1, 3)}), Chart.XIETA)
    return ctx, Hi


@pytest.fixture(scope="session")
def frequency_shift():
    ctx = BirkhoffContext((1,))
    Hi = to_chart(pq_series(1, {(2, 0): mpq(1, 2)}), Chart.XIETA)
    return ctx, Hi


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
