import pytest

_REPORT_LINES = []


@pytest.fixture
def report():
    """Record a ``PASS|FAIL`` line for the terminal summary and return it."""

    def emit(line):
        print(line)
        _REPORT_LINES.append(line)
        return line

    return emit


def pytest_terminal_summary(terminalreporter):
    if _REPORT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT_LINES:
            terminalreporter.write_line(line)
