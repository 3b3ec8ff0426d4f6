import pytest

# acceptance criteria append (number, title, passed, detail) here
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}")


@pytest.fixture
def criterion():
    """record(num, title, ok, detail): print a PASS/FAIL line, keep it for the summary, then assert."""

    def record(num, title, ok, detail=""):
        ok = bool(ok)
        print(f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}")
        ACCEPTANCE_LINES.append((num, title, ok, detail))
        assert ok, f"criterion {num} ({title}) failed: {detail}"

    return record


@pytest.fixture(scope="session")
def rs():
    from sparsephi.sieve import HorizonPolicy

    return HorizonPolicy.ROSSER_SCHOENFELD
