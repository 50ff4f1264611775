import pytest

from lcmlab.experiments import TableProvider

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def provider():
    """One in-memory table store for the whole run; tables are built once per polynomial."""
    return TableProvider(cache=None)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
