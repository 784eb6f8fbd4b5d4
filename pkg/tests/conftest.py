import pytest

# Acceptance summary lines, printed once at the end of the session.
ACCEPTANCE_LINES = {}


@pytest.fixture
def report():
    def _report(number, ok, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
