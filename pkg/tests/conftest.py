import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store an acceptance outcome: ``record(k, ok, detail)``."""

    def _record(k, ok, detail=""):
        ACCEPTANCE[k] = (bool(ok), detail)
        line = f"ACCEPTANCE {k:2d} {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"ACCEPTANCE {k:2d} {'PASS' if ok else 'FAIL'}  {detail}")
