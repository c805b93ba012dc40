import pytest

from treebias import enumeration

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record a named acceptance check; every recorded line is echoed in the summary."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture(scope="session")
def table3_grid_results():
    """Float enumeration over the whole n = 3..25 grid (about 35M orderings)."""
    return {(n, m): enumeration.enumerate_expected_prevalence(n, m)
            for n, m in enumeration.table3_grid()}
