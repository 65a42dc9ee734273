"""Reference results for the bundled country study, plus the comparison runner.

Each golden case pairs a strategy with the ordering the original study
reported. Cases with policy "exact" are requirements: the pipeline must
reproduce the ordering on the bundled panel. Cases with policy "report"
are informational; the runner still compares them and reports rank
correlation, but disagreement is not a failure.

The two reference feature tables carry the study's published feature
values: one for the 2007-2012 window (checked against this package's
extraction within a stated tolerance) and one for the forecast features
(reported only, since they depend on the exact forecasting trajectory).
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from ..errors import ValidationError
from ..features import extract_features
from ..ingest import parse_timeseries_csv
from ..mcda import RankResult, rank_distance
from ..tensors import DecisionTensor, FeatureTensor
from .strategies import (
    ALTERNATIVES,
    CRITERIA,
    benchmark_panel,
    past_window_panel,
    predict_study_panel,
    run_strategy,
)

FEATURES = ("average", "slope", "cv")

EXACT = "exact"
REPORT = "report"


@dataclass(frozen=True)
class GoldenCase:
    strategy: str
    expected: tuple[str, ...]
    policy: str


GOLDEN_CASES: tuple[GoldenCase, ...] = (
    GoldenCase("actual-features", ("Netherlands", "Japan", "France", "Belgium", "Canada"), EXACT),
    GoldenCase("predicted-features", ("Netherlands", "Japan", "France", "Belgium", "Canada"), EXACT),
    GoldenCase("current-year", ("Japan", "Netherlands", "Belgium", "Canada", "France"), EXACT),
    GoldenCase("actual-year-2013", ("Japan", "Netherlands", "Belgium", "Canada", "France"), EXACT),
    GoldenCase("predicted-year-2013", ("Japan", "Netherlands", "Belgium", "Canada", "France"), EXACT),
    GoldenCase("actual-year-2014", ("Japan", "Netherlands", "Belgium", "Canada", "France"), EXACT),
    GoldenCase("predicted-year-2014", ("Japan", "Netherlands", "Belgium", "Canada", "France"), EXACT),
    GoldenCase("actual-year-2015", ("Netherlands", "Japan", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("predicted-year-2015", ("Netherlands", "Japan", "Belgium", "Canada", "France"), REPORT),
    GoldenCase("actual-year-2016", ("Japan", "Netherlands", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("predicted-year-2016", ("Netherlands", "Japan", "Belgium", "Canada", "France"), REPORT),
    GoldenCase("actual-year-2017", ("Japan", "Netherlands", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("predicted-year-2017", ("Netherlands", "Japan", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("actual-year-2018", ("Japan", "Netherlands", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("predicted-year-2018", ("Netherlands", "Japan", "Belgium", "France", "Canada"), REPORT),
    GoldenCase("past-window-features", ("Netherlands", "Japan", "Belgium", "France", "Canada"), EXACT),
    GoldenCase("predicted-features-nlms", ("Belgium", "Canada", "France", "Japan", "Netherlands"), REPORT),
    GoldenCase("actual-features-topsis", ("Canada", "Netherlands", "France", "Belgium", "Japan"), REPORT),
    GoldenCase("predicted-features-topsis", ("Canada", "Netherlands", "France", "Belgium", "Japan"), REPORT),
    GoldenCase("predicted-features-topsis-nlms", ("France", "Belgium", "Netherlands", "Canada", "Japan"), REPORT),
)

# Published 2012 snapshot (savings, inflation, unemployment per country).
CURRENT_YEAR_REFERENCE = np.array(
    [
        [23.15, 97.68, 7.55],
        [21.28, 121.68, 7.32],
        [21.66, 98.33, 9.79],
        [23.62, 96.22, 4.33],
        [29.39, 96.98, 5.83],
    ]
)

# Published features of the 2007-2012 window, indexed
# [alternative, criterion, feature] with features (average, slope, cv).
PAST_FEATURE_REFERENCE = np.array(
    [
        [[23.631, -0.443, 0.072], [91.846, 2.154, 0.041], [7.563, 0.035, 0.060]],
        [[21.733, -0.699, 0.095], [116.333, 2.010, 0.030], [7.229, 0.289, 0.120]],
        [[22.298, -0.444, 0.054], [93.813, 1.635, 0.030], [8.798, 0.414, 0.092]],
        [[25.610, -1.036, 0.079], [97.006, -0.360, 0.008], [4.476, 0.121, 0.107]],
        [[28.011, 0.274, 0.045], [92.203, 1.598, 0.030], [4.666, 0.370, 0.150]],
    ]
)

# Published features of the study's forecast block (reported only).
PREDICTED_FEATURE_REFERENCE = np.array(
    [
        [[22.7, -0.069, 0.007], [105.6, 2.255, 0.037], [7.2, -0.114, 0.027]],
        [[20.9, -0.003, 0.012], [131.5, 2.905, 0.038], [7.0, -0.078, 0.021]],
        [[21.4, -0.054, 0.006], [105.6, 2.110, 0.034], [9.8, -0.050, 0.011]],
        [[22.4, -0.277, 0.027], [97.8, 0.453, 0.008], [4.4, 0.047, 0.022]],
        [[30.1, 0.149, 0.009], [103.9, 2.011, 0.033], [5.4, -0.200, 0.113]],
    ]
)

# A published feature value counts as matched when the computed value is
# within 0.5 percent (relative) or 0.005 (absolute), whichever is looser.
FEATURE_REL_TOL = 0.005
FEATURE_ABS_TOL = 0.005

DATA_FILE = "country_panel.csv"
CHECKSUM_FILE = "country_panel.sha256"


def _data_text(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


def load_country_panel(verify: bool = True) -> DecisionTensor:
    """Load the bundled 5 x 3 x 39 yearly country panel.

    With verify=True (the default) the file's SHA-256 digest is checked
    against the recorded one, so silent edits of the bundled data are
    caught instead of quietly shifting every downstream result.
    """
    text = _data_text(DATA_FILE)
    if verify:
        recorded = _data_text(CHECKSUM_FILE).split()[0].strip()
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        if digest != recorded:
            raise ValidationError(
                f"bundled panel checksum mismatch: recorded {recorded[:12]}..., "
                f"computed {digest[:12]}..."
            )
    panel = parse_timeseries_csv(io.StringIO(text))
    if panel.alternative_ids != ALTERNATIVES or panel.criterion_ids != CRITERIA:
        raise ValidationError("bundled panel axes do not match the study definition")
    return panel


def compare_feature_table(computed: FeatureTensor, reference: np.ndarray) -> np.ndarray:
    """Boolean per-cell match mask against a published feature table."""
    if computed.values.shape != reference.shape:
        raise ValidationError(
            f"feature table shape {computed.values.shape} != reference {reference.shape}"
        )
    diff = np.abs(computed.values - reference)
    return (diff <= FEATURE_ABS_TOL) | (diff <= FEATURE_REL_TOL * np.abs(reference))


@dataclass(frozen=True)
class CaseOutcome:
    case: GoldenCase
    result: RankResult
    matched: bool
    tau: float

    @property
    def required(self) -> bool:
        return self.case.policy == EXACT


@dataclass(frozen=True)
class GoldenReport:
    outcomes: tuple[CaseOutcome, ...]
    past_features: FeatureTensor
    past_feature_match: np.ndarray
    predicted_features: FeatureTensor
    predicted_feature_match: np.ndarray

    @property
    def required_failures(self) -> tuple[CaseOutcome, ...]:
        return tuple(o for o in self.outcomes if o.required and not o.matched)

    @property
    def all_required_passed(self) -> bool:
        return not self.required_failures and bool(self.past_feature_match.all())


def run_golden(panel: Optional[DecisionTensor] = None) -> GoldenReport:
    """Run every golden case against a panel (bundled one by default)."""
    if panel is None:
        panel = load_country_panel()
    outcomes = []
    for case in GOLDEN_CASES:
        result = run_strategy(case.strategy, panel)
        expected = RankResult(
            result.alternative_ids,
            np.arange(len(case.expected), 0, -1, dtype=float)[
                [case.expected.index(a) for a in result.alternative_ids]
            ],
            case.expected,
            (),
            method="reference",
        )
        matched = result.ordering == case.expected
        tau = rank_distance(result, expected).tau
        outcomes.append(CaseOutcome(case, result, matched, tau))
    past = extract_features(past_window_panel(panel))
    predicted = extract_features(predict_study_panel(panel))
    return GoldenReport(
        tuple(outcomes),
        past,
        compare_feature_table(past, PAST_FEATURE_REFERENCE),
        predicted,
        compare_feature_table(predicted, PREDICTED_FEATURE_REFERENCE),
    )


def format_report(report: GoldenReport) -> str:
    """Human-readable summary of a golden run."""
    lines = []
    width = max(len(o.case.strategy) for o in report.outcomes)
    for o in report.outcomes:
        status = "ok" if o.matched else ("FAIL" if o.required else "differs")
        lines.append(
            f"{o.case.strategy:<{width}}  [{o.case.policy}]  {status:<7} "
            f"tau={o.tau:+.3f}  got {' > '.join(o.result.ordering)}"
        )
        if not o.matched:
            lines.append(f"{'':<{width}}  expected {' > '.join(o.case.expected)}")
    past_ok = int(report.past_feature_match.sum())
    pred_ok = int(report.predicted_feature_match.sum())
    lines.append(f"past-window feature table: {past_ok}/{report.past_feature_match.size} cells within tolerance")
    lines.append(f"forecast feature table (informational): {pred_ok}/{report.predicted_feature_match.size} cells within tolerance")
    lines.append(
        "all required cases passed" if report.all_required_passed else "REQUIRED CASES FAILED"
    )
    return "\n".join(lines) + "\n"
