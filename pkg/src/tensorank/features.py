"""Time-series feature extraction and direction derivation.

Maps a time-indexed tensor (predicted or observed) into a feature tensor
holding, per (alternative, criterion) fiber, summaries such as the
average, the fitted slope, and the coefficient of variation. The feature
registry is open: additional summaries can be registered without touching
the aggregation stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import ValidationError
from .tensors import (
    CriterionFeatureDirections,
    DecisionTensor,
    Direction,
    FeatureTensor,
    PredictionTensor,
)

# Below this absolute mean the CV is meaningless; the sentinel +inf ranks
# strictly worse than any finite CV in downstream comparisons.
CV_MEAN_FLOOR = 1e-12


def feature_average(series) -> float:
    """Arithmetic mean of the series."""
    x = np.asarray(series, dtype=float)
    if x.size < 1:
        raise ValidationError("average requires at least 1 sample")
    return float(x.mean())


def feature_slope(series) -> float:
    """Ordinary-least-squares slope of the series against index 1..len.

    Calendar spacing is assumed uniform, so only the index matters.
    """
    x = np.asarray(series, dtype=float)
    if x.size < 2:
        raise ValidationError("slope requires at least 2 samples")
    t = np.arange(1, x.size + 1, dtype=float)
    t_centered = t - t.mean()
    return float((t_centered * (x - x.mean())).sum() / (t_centered * t_centered).sum())


def feature_cv(series) -> float:
    """Coefficient of variation: population std over the absolute mean.

    A near-zero mean (|mean| < 1e-12) yields the sentinel +inf so that the
    series ranks as maximally dispersed instead of failing the run.
    """
    x = np.asarray(series, dtype=float)
    if x.size < 2:
        raise ValidationError("coefficient of variation requires at least 2 samples")
    mean = x.mean()
    if abs(mean) < CV_MEAN_FLOOR:
        return math.inf
    return float(x.std() / abs(mean))


@dataclass(frozen=True)
class FeatureDef:
    """One registered fiber summary.

    fixed_direction pins the optimization sense of the feature regardless
    of the criterion (e.g. dispersion is always minimized); None means the
    feature inherits the criterion's base direction.
    """

    feature_id: str
    func: Callable[[np.ndarray], float]
    min_length: int = 1
    fixed_direction: Optional[Direction] = None


_REGISTRY: dict[str, FeatureDef] = {}
_ALIASES = {
    "mean": "average",
    "avg": "average",
    "slope_coefficient": "slope",
    "sc": "slope",
    "s.c.": "slope",
    "coefficient_of_variation": "cv",
    "c.v.": "cv",
}

DEFAULT_FEATURES = ("average", "slope", "cv")


def register_feature(defn: FeatureDef, overwrite: bool = False) -> None:
    """Add a feature to the registry; refuses silent redefinition."""
    if defn.feature_id in _REGISTRY and not overwrite:
        raise ValidationError(f"feature {defn.feature_id!r} is already registered")
    _REGISTRY[defn.feature_id] = defn


register_feature(FeatureDef("average", feature_average, min_length=1))
register_feature(FeatureDef("slope", feature_slope, min_length=2))
register_feature(FeatureDef("cv", feature_cv, min_length=2, fixed_direction=Direction.MINIMIZE))


def resolve_features(feature_ids: Sequence[str]) -> tuple[FeatureDef, ...]:
    """Map feature names (or aliases) to registry entries, keeping order."""
    if len(feature_ids) == 0:
        raise ValidationError("feature set must not be empty")
    defs = []
    seen = set()
    for raw in feature_ids:
        fid = _ALIASES.get(str(raw).strip().lower(), str(raw).strip().lower())
        if fid not in _REGISTRY:
            raise ValidationError(f"unknown feature {raw!r}; known: {sorted(_REGISTRY)}")
        if fid in seen:
            raise ValidationError(f"duplicate feature {raw!r} in feature set")
        seen.add(fid)
        defs.append(_REGISTRY[fid])
    return tuple(defs)


def extract_features(
    panel: Union[DecisionTensor, PredictionTensor],
    feature_ids: Sequence[str] = DEFAULT_FEATURES,
) -> FeatureTensor:
    """Summarize every fiber of a time-indexed tensor into a feature tensor.

    The panel's last axis is treated as time. Output shape is
    (alternatives, criteria, features), features in the order given.
    """
    defs = resolve_features(feature_ids)
    length = panel.values.shape[2]
    for d in defs:
        if length < d.min_length:
            raise ValidationError(
                f"feature {d.feature_id!r} needs at least {d.min_length} samples, "
                f"panel has {length}"
            )
    n, m = panel.n_alternatives, panel.n_criteria
    out = np.empty((n, m, len(defs)))
    for i in range(n):
        for j in range(m):
            fiber = panel.values[i, j, :]
            for k, d in enumerate(defs):
                try:
                    out[i, j, k] = d.func(fiber)
                except ValidationError as exc:
                    raise ValidationError(
                        f"feature {d.feature_id!r} failed on fiber "
                        f"({panel.alternative_ids[i]}, {panel.criterion_ids[j]}): {exc}"
                    ) from exc
    return FeatureTensor(
        out,
        panel.alternative_ids,
        panel.criterion_ids,
        tuple(d.feature_id for d in defs),
    )


def derive_directions(
    base_directions: Mapping[str, Union[str, Direction]],
    feature_ids: Sequence[str] = DEFAULT_FEATURES,
    overrides: Optional[Mapping[str, Mapping[str, Union[str, Direction]]]] = None,
) -> CriterionFeatureDirections:
    """Expand per-criterion directions into the (criterion, feature) grid.

    Features inheriting the criterion sense (average, slope) copy the base
    direction; features with a fixed sense (cv) ignore it. ``overrides``
    maps criterion -> feature -> direction and wins over both rules.
    """
    defs = resolve_features(feature_ids)
    criterion_ids = tuple(base_directions.keys())
    base = tuple(Direction.parse(base_directions[c]) for c in criterion_ids)
    over: dict[tuple[str, str], Direction] = {}
    for crit, per_feature in (overrides or {}).items():
        if crit not in criterion_ids:
            raise ValidationError(f"direction override for unknown criterion {crit!r}")
        for feat, direction in per_feature.items():
            fdef = resolve_features([feat])[0]
            over[(crit, fdef.feature_id)] = Direction.parse(direction)
    cells = []
    for crit, base_dir in zip(criterion_ids, base):
        row = []
        for d in defs:
            cell = d.fixed_direction if d.fixed_direction is not None else base_dir
            row.append(over.get((crit, d.feature_id), cell))
        cells.append(tuple(row))
    return CriterionFeatureDirections(
        criterion_ids, tuple(d.feature_id for d in defs), base, tuple(cells)
    )


def matrix_directions(base_directions: Mapping[str, Union[str, Direction]]) -> CriterionFeatureDirections:
    """Direction grid for matrix-mode aggregation: one 'value' slab, base sense."""
    criterion_ids = tuple(base_directions.keys())
    base = tuple(Direction.parse(base_directions[c]) for c in criterion_ids)
    return CriterionFeatureDirections(
        criterion_ids, ("value",), base, tuple((d,) for d in base)
    )
