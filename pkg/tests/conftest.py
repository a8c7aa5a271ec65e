import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """record(n, ok, detail): log one acceptance line, then fail the test if not ok."""
    def record(n, ok, detail=""):
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[ACCEPTANCE][n] = line
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
