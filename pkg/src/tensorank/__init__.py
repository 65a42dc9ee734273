"""tensorank: rank alternatives by forecasting criteria time series.

The pipeline has three stages, usable together or on their own:

1. predict: per-(alternative, criterion) adaptive filtering of the
   history, yielding a tensor of forecast values (``predict_tensor``).
2. describe: reduce each forecast (or observed) series to features such
   as average, trend slope and coefficient of variation
   (``extract_features``).
3. rank: aggregate the feature tensor into a total order by pairwise
   net flows (``promethee_tensor``), with a classical single-matrix
   variant (``promethee_matrix``) and an ideal-point alternative
   (``topsis_tensor``).
"""

from .errors import NumericError, TensorankError, ValidationError
from .features import (
    DEFAULT_FEATURES,
    derive_directions,
    extract_features,
    feature_average,
    feature_cv,
    feature_slope,
    matrix_directions,
    register_feature,
)
from .ingest import (
    RunConfig,
    emit_results,
    parse_config,
    parse_timeseries_csv,
    write_timeseries_csv,
)
from .mcda import (
    PairwiseTensor,
    PreferenceMatrix,
    RankComparison,
    RankResult,
    WeightScheme,
    global_preference,
    net_flow,
    pairwise_differences,
    promethee_matrix,
    promethee_pipeline,
    promethee_tensor,
    rank_distance,
    rank_from_scores,
    topsis_tensor,
    usual_preference,
)
from .predict import (
    FilterConfig,
    NlmsFilter,
    PredictionReport,
    RlsFilter,
    lagged_regressors,
    predict_fiber,
    predict_tensor,
)
from .tensors import (
    CriterionFeatureDirections,
    DecisionMatrix,
    DecisionTensor,
    Direction,
    FeatureTensor,
    PredictionTensor,
)

__version__ = "0.1.0"

__all__ = [
    "CriterionFeatureDirections",
    "DEFAULT_FEATURES",
    "DecisionMatrix",
    "DecisionTensor",
    "Direction",
    "FeatureTensor",
    "FilterConfig",
    "NlmsFilter",
    "NumericError",
    "PairwiseTensor",
    "PredictionReport",
    "PredictionTensor",
    "PreferenceMatrix",
    "RankComparison",
    "RankResult",
    "RlsFilter",
    "RunConfig",
    "TensorankError",
    "ValidationError",
    "WeightScheme",
    "__version__",
    "derive_directions",
    "emit_results",
    "extract_features",
    "feature_average",
    "feature_cv",
    "feature_slope",
    "global_preference",
    "lagged_regressors",
    "matrix_directions",
    "net_flow",
    "pairwise_differences",
    "parse_config",
    "parse_timeseries_csv",
    "predict_fiber",
    "predict_tensor",
    "promethee_matrix",
    "promethee_pipeline",
    "promethee_tensor",
    "rank_distance",
    "rank_from_scores",
    "register_feature",
    "topsis_tensor",
    "usual_preference",
    "write_timeseries_csv",
]
