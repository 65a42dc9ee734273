"""The country-ranking study: constants, derived inputs and strategies.

The bundled study ranks five countries on three macroeconomic criteria
observed yearly from 1980 to 2018. The decision is taken at the end of
2012; the 2013 to 2018 samples serve as the benchmark for judging what
the forecasting pipeline predicted. Every named strategy maps the full
panel to a ranking, so the same registry drives the command line
reproduction and the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from ..features import DEFAULT_FEATURES, derive_directions, extract_features
from ..mcda import RankResult, WeightScheme, promethee_matrix, promethee_tensor, topsis_tensor
from ..predict import FilterConfig, predict_tensor
from ..tensors import DecisionMatrix, DecisionTensor, Direction, PredictionTensor

ALTERNATIVES = ("Belgium", "Canada", "France", "Japan", "Netherlands")
CRITERIA = ("savings", "inflation", "unemployment")
DIRECTIONS: Mapping[str, Direction] = {
    "savings": Direction.MAXIMIZE,  # gross national savings, percent of GDP
    "inflation": Direction.MINIMIZE,  # average consumer price index level
    "unemployment": Direction.MINIMIZE,  # percent of the labor force
}
FIRST_YEAR = 1980
CUTOFF_YEAR = 2012
LAST_YEAR = 2018
HORIZON = LAST_YEAR - CUTOFF_YEAR
PAST_WINDOW = (2007, 2012)

RLS_STUDY_FILTER = FilterConfig(
    algorithm="rls",
    order=2,
    forgetting_factor={"savings": 0.90, "inflation": 0.99, "unemployment": 0.90},
    default_forgetting=0.90,
)
NLMS_STUDY_FILTER = FilterConfig(algorithm="nlms", order=2, step_size=0.5)


def feature_directions(feature_ids=DEFAULT_FEATURES):
    return derive_directions(DIRECTIONS, feature_ids)


def predict_study_panel(panel: DecisionTensor, algorithm: str = "rls") -> PredictionTensor:
    """Forecast 2013-2018 from the pre-cutoff slice of the panel."""
    history = panel.window(panel.time_labels[0], CUTOFF_YEAR)
    config = RLS_STUDY_FILTER if algorithm == "rls" else NLMS_STUDY_FILTER
    return predict_tensor(history, config, horizon=HORIZON, keep_traces=False).predictions


def benchmark_panel(panel: DecisionTensor) -> DecisionTensor:
    """The actual post-cutoff samples (2013-2018)."""
    return panel.window(CUTOFF_YEAR + 1, LAST_YEAR)


def past_window_panel(panel: DecisionTensor) -> DecisionTensor:
    """The six pre-decision years (2007-2012)."""
    return panel.window(*PAST_WINDOW)


def rank_features(block) -> RankResult:
    """Feature-tensor ranking used by the study (uniform cell weights)."""
    features = extract_features(block)
    return promethee_tensor(features, feature_directions())


def rank_features_topsis(block) -> RankResult:
    features = extract_features(block)
    return topsis_tensor(features, feature_directions())


def rank_year(matrix: DecisionMatrix) -> RankResult:
    """Single-year ranking with the classical matrix method."""
    return promethee_matrix(matrix, DIRECTIONS)


@dataclass(frozen=True)
class Strategy:
    """A named way of turning the study panel into one ranking."""

    name: str
    description: str
    run: Callable[[DecisionTensor], RankResult]


def _year_strategies() -> list[Strategy]:
    out = []
    for year in range(CUTOFF_YEAR + 1, LAST_YEAR + 1):
        out.append(
            Strategy(
                f"actual-year-{year}",
                f"classical single-year ranking on the actual {year} values",
                lambda panel, y=year: rank_year(panel.at_time(y)),
            )
        )
        out.append(
            Strategy(
                f"predicted-year-{year}",
                f"classical single-year ranking on the values forecast for {year}",
                lambda panel, y=year: rank_year(predict_study_panel(panel).step_matrix(y)),
            )
        )
    return out


STRATEGIES: dict[str, Strategy] = {
    s.name: s
    for s in [
        Strategy(
            "predicted-features",
            "forecast 2013-2018, extract features, rank by net flow",
            lambda panel: rank_features(predict_study_panel(panel)),
        ),
        Strategy(
            "actual-features",
            "features of the actual 2013-2018 values, ranked by net flow",
            lambda panel: rank_features(benchmark_panel(panel)),
        ),
        Strategy(
            "current-year",
            "classical single-year ranking on the 2012 values",
            lambda panel: rank_year(panel.at_time(CUTOFF_YEAR)),
        ),
        Strategy(
            "past-window-features",
            "features of the 2007-2012 window, ranked by net flow",
            lambda panel: rank_features(past_window_panel(panel)),
        ),
        Strategy(
            "predicted-features-nlms",
            "like predicted-features but forecasting with the normalized LMS filter",
            lambda panel: rank_features(predict_study_panel(panel, "nlms")),
        ),
        Strategy(
            "actual-features-topsis",
            "features of the actual 2013-2018 values, ranked by closeness to ideal",
            lambda panel: rank_features_topsis(benchmark_panel(panel)),
        ),
        Strategy(
            "predicted-features-topsis",
            "forecast 2013-2018, extract features, rank by closeness to ideal",
            lambda panel: rank_features_topsis(predict_study_panel(panel)),
        ),
        Strategy(
            "predicted-features-topsis-nlms",
            "closeness-to-ideal ranking of features forecast with normalized LMS",
            lambda panel: rank_features_topsis(predict_study_panel(panel, "nlms")),
        ),
        *_year_strategies(),
    ]
}


def run_strategy(name: str, panel: DecisionTensor) -> RankResult:
    if name not in STRATEGIES:
        raise KeyError(f"unknown strategy {name!r}; known: {sorted(STRATEGIES)}")
    return STRATEGIES[name].run(panel)
