"""Shared fixtures plus the acceptance-criteria terminal summary."""

import numpy as np
import pytest

from tensorank import DecisionTensor
from tensorank.experiments import load_country_panel

# ---------------------------------------------------------------------------
# fixtures

@pytest.fixture(scope="session")
def country_panel() -> DecisionTensor:
    """The bundled 5 x 3 x 39 study panel (checksum verified once per run)."""
    return load_country_panel()


@pytest.fixture
def small_panel() -> DecisionTensor:
    """A deterministic 3 x 2 x 12 panel for fast plumbing tests."""
    rng = np.random.default_rng(7)
    values = rng.normal(10.0, 2.0, size=(3, 2, 12)).round(3)
    return DecisionTensor(
        values,
        ("alpha", "beta", "gamma"),
        ("yield", "cost"),
        tuple(range(2000, 2012)),
    )


@pytest.fixture
def acceptance_note():
    """Attach a short note to the current acceptance criterion's summary line."""

    def add(criterion: int, text: str) -> None:
        _NOTES[criterion] = text

    return add


# ---------------------------------------------------------------------------
# acceptance summary: one pass/fail line per criterion after the run

_CRITERIA = {
    1: "forecast ranking equals the actual-data benchmark ranking",
    2: "classical single-year ranking on the decision-year data",
    3: "feature ranking of the six pre-decision years",
    4: "past-window feature table within tolerance; forecast block report-only",
    5: "per-year rankings match for the first two horizon years",
    6: "switching the filter to normalized LMS changes the final ranking",
    7: "recursive filter equals the direct weighted least-squares solve",
    8: "net-flow aggregation property suite on random tensors",
    9: "feature extraction property suite on random series",
    10: "lossless ingestion round-trip and row-level diagnostics",
}

_RESULTS: dict[int, str] = {}
_NOTES: dict[int, str] = {}


def _criterion_of(nodeid: str):
    if "test_acceptance.py" not in nodeid:
        return None
    name = nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return None
    try:
        return int(name.split("_")[2])
    except (IndexError, ValueError):
        return None


def pytest_runtest_logreport(report):
    num = _criterion_of(report.nodeid)
    if num is None:
        return
    if report.when == "call":
        _RESULTS[num] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _RESULTS[num] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        status = {"passed": "PASS", "failed": "FAIL"}.get(_RESULTS[num], _RESULTS[num].upper())
        line = f"{status}  criterion {num:>2}: {_CRITERIA.get(num, '')}"
        if num in _NOTES:
            line += f"  [{_NOTES[num]}]"
        terminalreporter.write_line(line)
