import pytest

ACCEPTANCE: dict[int, str] = {}
COLLECTED: set[int] = set()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            COLLECTED.add(mark.args[0])


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the criterion named by the test's marker."""
    number = request.node.get_closest_marker("criterion").args[0]

    def report(ok: bool, detail: str = "") -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE[number] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if not COLLECTED:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(COLLECTED):
        terminalreporter.write_line(ACCEPTANCE.get(number, f"criterion {number:2d}: FAIL  did not complete"))
