"""Bundled country-ranking study: data, strategies and reference results."""

from .golden import (
    CURRENT_YEAR_REFERENCE,
    EXACT,
    FEATURE_ABS_TOL,
    FEATURE_REL_TOL,
    GOLDEN_CASES,
    PAST_FEATURE_REFERENCE,
    PREDICTED_FEATURE_REFERENCE,
    REPORT,
    CaseOutcome,
    GoldenCase,
    GoldenReport,
    compare_feature_table,
    format_report,
    load_country_panel,
    run_golden,
)
from .strategies import (
    ALTERNATIVES,
    CRITERIA,
    CUTOFF_YEAR,
    DIRECTIONS,
    FIRST_YEAR,
    HORIZON,
    LAST_YEAR,
    NLMS_STUDY_FILTER,
    PAST_WINDOW,
    RLS_STUDY_FILTER,
    STRATEGIES,
    Strategy,
    benchmark_panel,
    feature_directions,
    past_window_panel,
    predict_study_panel,
    rank_features,
    rank_features_topsis,
    rank_year,
    run_strategy,
)

__all__ = [
    "ALTERNATIVES",
    "CRITERIA",
    "CURRENT_YEAR_REFERENCE",
    "CUTOFF_YEAR",
    "CaseOutcome",
    "DIRECTIONS",
    "EXACT",
    "FEATURE_ABS_TOL",
    "FEATURE_REL_TOL",
    "FIRST_YEAR",
    "GOLDEN_CASES",
    "GoldenCase",
    "GoldenReport",
    "HORIZON",
    "LAST_YEAR",
    "NLMS_STUDY_FILTER",
    "PAST_FEATURE_REFERENCE",
    "PAST_WINDOW",
    "PREDICTED_FEATURE_REFERENCE",
    "REPORT",
    "RLS_STUDY_FILTER",
    "STRATEGIES",
    "Strategy",
    "benchmark_panel",
    "compare_feature_table",
    "feature_directions",
    "format_report",
    "load_country_panel",
    "past_window_panel",
    "predict_study_panel",
    "rank_features",
    "rank_features_topsis",
    "rank_year",
    "run_golden",
    "run_strategy",
]
