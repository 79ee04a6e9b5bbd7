from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        status = "PASS" if report.passed else "FAIL"
        _acceptance_results.append((number, title, status))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    merged: dict[int, tuple[str, str]] = {}
    for number, title, status in _acceptance_results:
        prev = merged.get(number, (title, "PASS"))[1]
        merged[number] = (title, "FAIL" if "FAIL" in (prev, status) else "PASS")
    for number in sorted(merged):
        title, status = merged[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
