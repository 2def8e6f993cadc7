import pytest

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE.setdefault(criterion, []).append((passed, detail))


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[criterion]
        ok = all(p for p, _ in entries)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
        for passed, detail in entries:
            terminalreporter.write_line(f"    [{'ok' if passed else 'FAIL'}] {detail}")
