import pytest

from posetfix import FinitePoset

ACCEPTANCE_LINES = []


@pytest.fixture
def diamond():
    # 0 = {}, 1 = {a}, 2 = {b}, 3 = {a,b}
    return FinitePoset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture
def vposet():
    return FinitePoset.from_covers(3, [(0, 1), (0, 2)])


@pytest.fixture
def chain3():
    return FinitePoset.chain(3)


@pytest.fixture
def chain2():
    return FinitePoset.chain(2)


@pytest.fixture
def record():
    """Record one acceptance line; printed in the terminal summary."""

    def _record(number, text, passed):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}")
        assert passed, text

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
