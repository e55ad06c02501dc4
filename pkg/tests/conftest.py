import pytest

# filled by tests/test_acceptance.py; printed after the run
CRITERIA: dict[int, tuple[bool, str]] = {}
NOTES: list[str] = []


@pytest.fixture
def report():
    def record(number: int, ok: bool, detail: str) -> None:
        CRITERIA[number] = (ok, detail)
        assert ok, f"criterion {number}: {detail}"
    return record


@pytest.fixture
def note():
    return NOTES.append


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA and not NOTES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    for line in NOTES:
        terminalreporter.write_line(f"info: {line}")
