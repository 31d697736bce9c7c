import pytest

CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a named acceptance check; the summary prints one line per criterion."""

    def record(name: str, passed: bool, detail: str = ""):
        prev = CRITERIA.get(name, (True, ""))
        CRITERIA[name] = (prev[0] and bool(passed), "; ".join(x for x in (prev[1], detail) if x))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
