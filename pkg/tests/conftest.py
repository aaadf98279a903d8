"""Shared pytest hooks: surface acceptance-criterion outcomes in the run summary."""
from __future__ import annotations

_CRITERION_RESULTS: list[tuple[int, str, bool]] = []


def record_criterion(number: int, label: str, passed: bool) -> None:
    _CRITERION_RESULTS.append((number, label, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, passed in sorted(_CRITERION_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number:2d}: {label}")
