"""Shared fixtures and the acceptance-criterion summary lines."""
import re

import pytest

from iongate import ResonanceIntegers, solve_gate

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def regression_solution():
    """The committed scan fixture: k1=1, (p, q+, q-) = (1, 2, 1)."""
    return solve_gate(1, ResonanceIntegers(1, 2, 1), 2.0, 1.8)


@pytest.fixture(scope="session")
def clean_solution():
    """A solution whose block truly closes (no bus leak): k1=1, (1, 1, 0)."""
    return solve_gate(1, ResonanceIntegers(1, 1, 0), 1.8, 0.7)


def pytest_runtest_logreport(report):
    match = _CRITERION_RE.search(report.nodeid)
    if not match:
        return
    n, label = int(match.group(1)), match.group(2).replace("_", " ")
    if report.when == "call":
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _criteria[n] = (status, label)
    elif report.failed:  # setup/teardown error
        _criteria[n] = ("FAIL", label)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, label = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {label}")
