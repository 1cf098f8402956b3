"""Shared pytest plumbing: one PASS/FAIL summary line per acceptance check."""

import pytest

_collected: dict[str, tuple[str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(label): a check of the acceptance gate")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            label = marker.kwargs.get("label", item.name)
            _collected[label] = ("PASS" if rep.passed else "FAIL", rep.duration)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _collected:
        return
    terminalreporter.section("acceptance criteria")
    for label, (verdict, duration) in _collected.items():
        terminalreporter.write_line(f"{label}: {verdict} ({duration:.2f}s)")
