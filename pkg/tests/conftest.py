import pytest

_VERDICTS: list[str] = []


@pytest.fixture(scope="session")
def verdict_log():
    """Shared sink for acceptance verdict lines, echoed after the run."""
    return _VERDICTS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
