"""Ranking methods over feature tensors and decision matrices.

The main path aggregates a feature tensor into a net-flow ranking through
pairwise outranking: signed pairwise differences per (criterion, feature)
cell, a sign-based preference degree, a weighted global preference index,
and net flows in [-1, 1]. A classical matrix variant (single 'value'
feature slab) and an ideal-point method (TOPSIS over the same tensor
layout) are provided for comparison, plus Kendall-tau rank comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import ValidationError
from .tensors import (
    CriterionFeatureDirections,
    DecisionMatrix,
    Direction,
    FeatureTensor,
    _check_labels,
    _readonly_array,
)

# Scores closer than this are reported as tied and ordered by input order.
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class WeightScheme:
    """Non-negative weight per (criterion, feature) cell, summing to 1.

    Matrix-mode aggregation uses the degenerate single-feature grid
    (feature_ids == ("value",)), i.e. one weight per criterion.
    """

    criterion_ids: tuple[str, ...]
    feature_ids: tuple[str, ...]
    values: np.ndarray  # (m, w)

    def __post_init__(self):
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "feature_ids", _check_labels(self.feature_ids, "features"))
        object.__setattr__(self, "values", _readonly_array(self.values, 2, "weights"))
        m, w = len(self.criterion_ids), len(self.feature_ids)
        if self.values.shape != (m, w):
            raise ValidationError(f"weight grid shape {self.values.shape}, expected {(m, w)}")
        if not np.isfinite(self.values).all() or (self.values < 0).any():
            raise ValidationError("weights must be finite and non-negative")
        total = float(self.values.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"weights must sum to 1 (got {total!r})")

    @classmethod
    def uniform(cls, criterion_ids: Sequence[str], feature_ids: Sequence[str]) -> "WeightScheme":
        m, w = len(criterion_ids), len(feature_ids)
        return cls(tuple(criterion_ids), tuple(feature_ids), np.full((m, w), 1.0 / (m * w)))

    @classmethod
    def from_criterion_weights(
        cls,
        weights: Mapping[str, float],
        feature_ids: Sequence[str] = ("value",),
    ) -> "WeightScheme":
        """Spread per-criterion weights evenly across the feature axis."""
        criterion_ids = tuple(weights.keys())
        raw = np.array([float(weights[c]) for c in criterion_ids])
        if (raw < 0).any():
            raise ValidationError("criterion weights must be non-negative")
        total = raw.sum()
        if total <= 0:
            raise ValidationError("criterion weights must not all be zero")
        w = len(feature_ids)
        grid = np.repeat((raw / total)[:, None], w, axis=1) / w
        return cls(criterion_ids, tuple(feature_ids), grid)


@dataclass(frozen=True)
class PairwiseTensor:
    """Signed, direction-adjusted pairwise differences d[i, k, j, l].

    Positive means alternative i is preferred to k on cell (j, l);
    antisymmetric with a zero diagonal by construction.
    """

    values: np.ndarray  # (n, n, m, w)
    alternative_ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]
    feature_ids: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.values, dtype=float, copy=True)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"pairwise tensor must be (n, n, m, w), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "feature_ids", _check_labels(self.feature_ids, "features"))


@dataclass(frozen=True)
class PreferenceMatrix:
    """Global preference index pi[i, k] with zero diagonal."""

    values: np.ndarray  # (n, n)
    alternative_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, 2, "preference matrix"))
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        n = len(self.alternative_ids)
        if self.values.shape != (n, n):
            raise ValidationError(f"preference matrix shape {self.values.shape}, expected {(n, n)}")


@dataclass(frozen=True)
class RankResult:
    """Scores plus the induced ordering of alternatives.

    ``ordering`` lists alternative ids by descending score; alternatives
    whose scores differ by at most TIE_TOLERANCE form tie groups and are
    ordered among themselves by input order (never by preference).
    """

    alternative_ids: tuple[str, ...]
    scores: np.ndarray
    ordering: tuple[str, ...]
    tie_groups: tuple[tuple[str, ...], ...]
    method: str = ""

    def __post_init__(self):
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "scores", _readonly_array(self.scores, 1, "scores"))
        if self.scores.shape != (len(self.alternative_ids),):
            raise ValidationError("one score per alternative required")
        object.__setattr__(self, "ordering", tuple(self.ordering))
        object.__setattr__(self, "tie_groups", tuple(tuple(g) for g in self.tie_groups))

    def score_of(self, alternative: str) -> float:
        return float(self.scores[self.alternative_ids.index(alternative)])


def rank_from_scores(
    alternative_ids: Sequence[str],
    scores,
    method: str = "",
    tie_tolerance: float = TIE_TOLERANCE,
) -> RankResult:
    """Order alternatives by descending score with explicit tie groups."""
    ids = tuple(alternative_ids)
    arr = np.asarray(scores, dtype=float)
    order = sorted(range(len(ids)), key=lambda i: -arr[i])
    groups: list[list[int]] = []
    for idx in order:
        if groups and abs(arr[idx] - arr[groups[-1][0]]) <= tie_tolerance:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    ordering = tuple(ids[i] for g in groups for i in sorted(g))
    tie_groups = tuple(tuple(ids[i] for i in sorted(g)) for g in groups if len(g) > 1)
    return RankResult(ids, arr, ordering, tie_groups, method)


def _check_alignment(features: FeatureTensor, directions: CriterionFeatureDirections) -> None:
    if directions.criterion_ids != features.criterion_ids:
        raise ValidationError(
            f"direction criteria {directions.criterion_ids} do not match "
            f"tensor criteria {features.criterion_ids}"
        )
    if directions.feature_ids != features.feature_ids:
        raise ValidationError(
            f"direction features {directions.feature_ids} do not match "
            f"tensor features {features.feature_ids}"
        )


def pairwise_differences(
    features: FeatureTensor, directions: CriterionFeatureDirections
) -> PairwiseTensor:
    """Direction-adjusted performance differences for every ordered pair.

    For maximize cells d[i,k] = s[i] - s[k]; minimize cells flip the sign,
    so positive always reads "i preferred to k". Sentinel +inf entries
    (worst-case CV) lose against any finite value and tie with each other.
    """
    if features.n_alternatives < 2:
        raise ValidationError("pairwise comparison needs at least 2 alternatives")
    _check_alignment(features, directions)
    s = features.values
    signs = directions.signs()  # (m, w)
    with np.errstate(invalid="ignore"):
        raw = s[:, None, :, :] - s[None, :, :, :]
    # inf - inf yields NaN; equal-by-value cells (incl. two sentinels) are ties
    tied = s[:, None, :, :] == s[None, :, :, :]
    raw = np.where(tied, 0.0, raw)
    return PairwiseTensor(
        raw * signs[None, None, :, :],
        features.alternative_ids,
        features.criterion_ids,
        features.feature_ids,
    )


def usual_preference(d):
    """Sign-based preference degree: (sgn(d) + 1) / 2.

    Maps a positive difference to 1, a tie to 0.5 and a negative
    difference to 0. Accepts scalars or arrays.
    """
    return (np.sign(d) + 1.0) / 2.0


def global_preference(
    pairwise: PairwiseTensor,
    weights: WeightScheme,
    preference: Callable = usual_preference,
) -> PreferenceMatrix:
    """Weight-aggregate preference degrees into the n x n index pi.

    The diagonal is forced to zero (self-preference carries no meaning and
    net flows only sum over distinct pairs).
    """
    if weights.criterion_ids != pairwise.criterion_ids or weights.feature_ids != pairwise.feature_ids:
        raise ValidationError("weight grid does not match the pairwise tensor axes")
    degrees = preference(pairwise.values)  # (n, n, m, w)
    pi = np.einsum("ikjl,jl->ik", degrees, weights.values)
    np.fill_diagonal(pi, 0.0)
    return PreferenceMatrix(pi, pairwise.alternative_ids)


def net_flow(pi: PreferenceMatrix, method: str = "promethee-tensor") -> RankResult:
    """Positive minus negative mean flow per alternative, ranked descending.

    score(i) = mean_k pi[i, k] - mean_k pi[k, i] over the other n-1
    alternatives; each score lies in [-1, 1] and the scores sum to zero
    under a complementary preference function.
    """
    values = pi.values
    n = len(pi.alternative_ids)
    if n < 2:
        raise ValidationError("net flow needs at least 2 alternatives")
    if (values < 0).any():
        raise ValidationError("preference index must be non-negative")
    if np.abs(np.diagonal(values)).max() > 0:
        raise ValidationError("preference index must have a zero diagonal")
    flows = (values.sum(axis=1) - values.sum(axis=0)) / (n - 1)
    return rank_from_scores(pi.alternative_ids, flows, method)


@dataclass(frozen=True)
class PrometheeBreakdown:
    """Intermediate artifacts of one outranking run, for reports."""

    pairwise: PairwiseTensor
    preference: PreferenceMatrix
    ranking: RankResult


def promethee_pipeline(
    features: FeatureTensor,
    directions: CriterionFeatureDirections,
    weights: Optional[WeightScheme] = None,
    preference: Callable = usual_preference,
    method: str = "promethee-tensor",
) -> PrometheeBreakdown:
    if weights is None:
        weights = WeightScheme.uniform(features.criterion_ids, features.feature_ids)
    d = pairwise_differences(features, directions)
    pi = global_preference(d, weights, preference)
    return PrometheeBreakdown(d, pi, net_flow(pi, method))


def promethee_tensor(
    features: FeatureTensor,
    directions: CriterionFeatureDirections,
    weights: Optional[WeightScheme] = None,
    preference: Callable = usual_preference,
) -> RankResult:
    """Net-flow ranking of a feature tensor (weights default to uniform)."""
    return promethee_pipeline(features, directions, weights, preference).ranking


def promethee_matrix(
    matrix: DecisionMatrix,
    base_directions: Mapping[str, Union[str, Direction]],
    weights: Optional[Mapping[str, float]] = None,
    preference: Callable = usual_preference,
) -> RankResult:
    """Classical net-flow ranking of a plain decision matrix.

    Runs the tensor pipeline on a single 'value' feature slab, so matrix
    and tensor modes cannot drift apart.
    """
    criterion_ids = tuple(base_directions.keys())
    if criterion_ids != matrix.criterion_ids:
        raise ValidationError(
            f"direction criteria {criterion_ids} do not match matrix criteria {matrix.criterion_ids}"
        )
    features = FeatureTensor(
        matrix.values[:, :, None], matrix.alternative_ids, matrix.criterion_ids, ("value",)
    )
    base = tuple(Direction.parse(base_directions[c]) for c in criterion_ids)
    directions = CriterionFeatureDirections(
        criterion_ids, ("value",), base, tuple((b,) for b in base)
    )
    scheme = (
        WeightScheme.uniform(criterion_ids, ("value",))
        if weights is None
        else WeightScheme.from_criterion_weights(weights, ("value",))
    )
    return promethee_pipeline(features, directions, scheme, preference, "promethee-matrix").ranking


def topsis_tensor(
    features: FeatureTensor,
    directions: CriterionFeatureDirections,
    weights: Optional[WeightScheme] = None,
) -> RankResult:
    """Closeness-to-ideal ranking of a feature tensor.

    Each (criterion, feature) column is vector-normalized across
    alternatives and weighted; the ideal (anti-ideal) takes the best
    (worst) value per cell according to its direction; the score is
    D- / (D+ + D-) with Euclidean distances over all cells.
    """
    if features.n_alternatives < 2:
        raise ValidationError("ranking needs at least 2 alternatives")
    _check_alignment(features, directions)
    if weights is None:
        weights = WeightScheme.uniform(features.criterion_ids, features.feature_ids)
    if weights.criterion_ids != features.criterion_ids or weights.feature_ids != features.feature_ids:
        raise ValidationError("weight grid does not match the feature tensor axes")
    s = features.values
    if not np.isfinite(s).all():
        bad = np.argwhere(~np.isfinite(s))[0]
        raise ValidationError(
            "ideal-point ranking requires finite features; non-finite value at "
            f"({features.alternative_ids[bad[0]]}, {features.criterion_ids[bad[1]]}, "
            f"{features.feature_ids[bad[2]]})"
        )
    norms = np.sqrt((s * s).sum(axis=0))  # (m, w)
    zero = np.argwhere(norms == 0)
    if zero.size:
        j, l = zero[0]
        raise ValidationError(
            f"all-zero column ({features.criterion_ids[j]}, {features.feature_ids[l]}) "
            "cannot be vector-normalized"
        )
    v = (s / norms) * weights.values  # (n, m, w)
    maximize = directions.signs() > 0  # (m, w)
    ideal = np.where(maximize, v.max(axis=0), v.min(axis=0))
    anti = np.where(maximize, v.min(axis=0), v.max(axis=0))
    d_plus = np.sqrt(((v - ideal) ** 2).sum(axis=(1, 2)))
    d_minus = np.sqrt(((v - anti) ** 2).sum(axis=(1, 2)))
    denom = d_plus + d_minus
    scores = np.where(denom > 0, d_minus / np.where(denom > 0, denom, 1.0), 0.5)
    return rank_from_scores(features.alternative_ids, scores, "topsis-tensor")


@dataclass(frozen=True)
class RankComparison:
    """Kendall tau plus raw pair agreement between two orderings."""

    tau: float
    concordant: int
    discordant: int
    pairs: int

    @property
    def identical(self) -> bool:
        return self.discordant == 0 and self.concordant == self.pairs


def rank_distance(first: RankResult, second: RankResult) -> RankComparison:
    """Kendall tau between two rankings of the same alternative set."""
    if set(first.alternative_ids) != set(second.alternative_ids):
        raise ValidationError("rankings cover different alternative sets")
    ids = first.alternative_ids
    pos1 = {a: i for i, a in enumerate(first.ordering)}
    pos2 = {a: i for i, a in enumerate(second.ordering)}
    concordant = discordant = 0
    for i in range(len(ids)):
        for k in range(i + 1, len(ids)):
            a, b = ids[i], ids[k]
            s1 = pos1[a] - pos1[b]
            s2 = pos2[a] - pos2[b]
            if s1 * s2 > 0:
                concordant += 1
            else:
                discordant += 1
    pairs = len(ids) * (len(ids) - 1) // 2
    tau = (concordant - discordant) / pairs if pairs else 1.0
    return RankComparison(tau, concordant, discordant, pairs)
