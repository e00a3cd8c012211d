"""Shared test configuration.

The acceptance tests register one result per criterion; the summary hook
prints a PASS/FAIL line for each at the end of the run, so the gate is
visible even when pytest captures stdout.
"""

from __future__ import annotations

import pytest

_ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def record_criterion(number: int, name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.append((number, name, passed, detail))


@pytest.fixture
def acceptance():
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d} {status}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
