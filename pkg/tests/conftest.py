import pytest

from cobhamlab.substitutions import Substitution, fixed_point


def S(rules, start=None):
    return Substitution.from_strings(rules, start)


FIB = {"0": "01", "1": "0"}
TM = {"0": "01", "1": "10"}


@pytest.fixture
def fib():
    return S(FIB, "0")


@pytest.fixture
def tm():
    return S(TM, "0")


@pytest.fixture
def fib_word(fib):
    return fixed_point(fib)


@pytest.fixture
def tm_word(tm):
    return fixed_point(tm)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
