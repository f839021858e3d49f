import pytest
from mpmath import mp

P = 50


@pytest.fixture(autouse=True)
def _precision():
    """Every test runs at 50 digits and leaves the global context untouched."""
    with mp.workdps(P):
        yield


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
