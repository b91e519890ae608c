"""Shared pytest wiring: per-criterion pass/fail lines for the acceptance suite."""

import pytest

_ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, name): acceptance criterion identity"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            number, name = marker.args
            status = "PASS" if report.passed else "FAIL"
            _ACCEPTANCE_LINES.append((number, f"criterion {number:02d} [{name}]: {status}"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
