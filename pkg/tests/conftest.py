import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from burrweibull.errors import ReportError  # noqa: E402
from burrweibull.simulation import SCENARIO_I, SCENARIO_II, SimConfig, run_simulation  # noqa: E402

_ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _record(criterion, ok, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
        assert ok, detail

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _run(cfg):
    try:
        return run_simulation(cfg), None
    except ReportError as exc:
        return exc.report, exc


@pytest.fixture(scope="session")
def table3_runs():
    """Both study scenarios at N=200, n in {25, 200, 400, 600}; shared across modules."""
    return {
        "I": _run(SimConfig(SCENARIO_I)),
        "II": _run(SimConfig(SCENARIO_II)),
    }
