import pytest

_verdicts = []


@pytest.fixture
def verdict():
    """Collects one human-readable line per acceptance criterion."""
    return _verdicts.append


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _verdicts:
            terminalreporter.write_line(line)
