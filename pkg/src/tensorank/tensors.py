"""Dense labeled tensors and matrices for multi-criteria panel data.

Decision data at this scale (at most a few thousand cells) is stored as
dense row-major numpy arrays with explicit axis labels. Every container in
this module is immutable after construction: the backing arrays are
read-only copies, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ValidationError

Record = tuple[str, str, int, float]


class Direction(Enum):
    """Optimization sense of a criterion or of a (criterion, feature) cell."""

    MAXIMIZE = "max"
    MINIMIZE = "min"

    @classmethod
    def parse(cls, value: Union[str, "Direction"]) -> "Direction":
        """Accept 'max'/'maximize'/'benefit' or 'min'/'minimize'/'cost'."""
        if isinstance(value, Direction):
            return value
        key = str(value).strip().lower()
        if key in ("max", "maximize", "maximise", "benefit"):
            return cls.MAXIMIZE
        if key in ("min", "minimize", "minimise", "cost"):
            return cls.MINIMIZE
        raise ValidationError(f"unknown direction {value!r}; expected 'max' or 'min'")

    @property
    def sign(self) -> float:
        """+1.0 for MAXIMIZE, -1.0 for MINIMIZE."""
        return 1.0 if self is Direction.MAXIMIZE else -1.0


def _readonly_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise ValidationError(f"{what}: expected a {ndim}-d array, got {arr.ndim}-d")
    arr.setflags(write=False)
    return arr


def _check_labels(labels: Sequence, what: str) -> tuple:
    labels = tuple(labels)
    if len(labels) == 0:
        raise ValidationError(f"{what}: at least one label required")
    if len(set(labels)) != len(labels):
        raise ValidationError(f"{what}: labels must be unique, got {labels}")
    return labels


def _check_time_labels(labels: Sequence) -> tuple[int, ...]:
    try:
        labels = tuple(int(t) for t in labels)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"time labels must be integers, got {tuple(labels)!r}") from exc
    if len(labels) == 0:
        raise ValidationError("time labels: at least one label required")
    if any(b <= a for a, b in zip(labels, labels[1:])):
        raise ValidationError(f"time labels must be strictly increasing, got {labels}")
    return labels


def _axis_index(label, labels: Sequence, what: str) -> int:
    """Resolve an axis position from an integer index or a label."""
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        idx = int(label)
        if not -len(labels) <= idx < len(labels):
            raise IndexError(f"{what} index {idx} out of range for {len(labels)} entries")
        return idx % len(labels)
    try:
        return labels.index(label)
    except ValueError:
        raise ValidationError(f"unknown {what} {label!r}; known: {list(labels)}") from None


def _time_index(label, labels: Sequence[int], what: str) -> int:
    """Resolve a time position from its label value (never positional)."""
    try:
        return labels.index(int(label))
    except (TypeError, ValueError):
        raise ValidationError(
            f"unknown {what} {label!r}; known range {labels[0]}..{labels[-1]}"
        ) from None


@dataclass(frozen=True)
class DecisionMatrix:
    """Snapshot of alternative evaluations at a single instant.

    values[i, j] is the evaluation of alternative i on criterion j.
    """

    values: np.ndarray
    alternative_ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, 2, "decision matrix"))
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        n, m = self.values.shape
        if n != len(self.alternative_ids) or m != len(self.criterion_ids):
            raise ValidationError(
                f"decision matrix shape {self.values.shape} does not match labels "
                f"({len(self.alternative_ids)} alternatives, {len(self.criterion_ids)} criteria)"
            )
        if not np.isfinite(self.values).all():
            raise ValidationError("decision matrix contains non-finite values")

    @property
    def n_alternatives(self) -> int:
        return len(self.alternative_ids)

    @property
    def n_criteria(self) -> int:
        return len(self.criterion_ids)


@dataclass(frozen=True)
class DecisionTensor:
    """Alternatives x criteria x time panel of observed evaluations.

    values[i, j, t] is the evaluation of alternative i on criterion j at
    the t-th time label. Time labels are integers (years in the bundled
    data) and strictly increasing. Missing or non-finite entries are
    rejected at construction; there is no imputation.
    """

    values: np.ndarray
    alternative_ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]
    time_labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, 3, "decision tensor"))
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "time_labels", _check_time_labels(self.time_labels))
        shape = (len(self.alternative_ids), len(self.criterion_ids), len(self.time_labels))
        if self.values.shape != shape:
            raise ValidationError(
                f"decision tensor shape {self.values.shape} does not match labels {shape}"
            )
        if not np.isfinite(self.values).all():
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise ValidationError(
                "decision tensor contains non-finite value at "
                f"({self.alternative_ids[bad[0]]}, {self.criterion_ids[bad[1]]}, {self.time_labels[bad[2]]})"
            )

    @property
    def n_alternatives(self) -> int:
        return len(self.alternative_ids)

    @property
    def n_criteria(self) -> int:
        return len(self.criterion_ids)

    @property
    def n_periods(self) -> int:
        return len(self.time_labels)

    def fiber(self, alternative, criterion) -> np.ndarray:
        """Return the time series of one (alternative, criterion) pair.

        ``alternative`` and ``criterion`` may be axis labels or integer
        positions. The result is a fresh 1-d array of length ``n_periods``
        in time order.
        """
        i = _axis_index(alternative, self.alternative_ids, "alternative")
        j = _axis_index(criterion, self.criterion_ids, "criterion")
        return self.values[i, j, :].copy()

    def window(self, from_label: int, to_label: int) -> "DecisionTensor":
        """Restrict the time axis to the inclusive label range [from, to]."""
        lo = _time_index(from_label, self.time_labels, "time label")
        hi = _time_index(to_label, self.time_labels, "time label")
        if lo > hi:
            raise ValidationError(f"window: from={from_label} is after to={to_label}")
        return DecisionTensor(
            self.values[:, :, lo : hi + 1],
            self.alternative_ids,
            self.criterion_ids,
            self.time_labels[lo : hi + 1],
        )

    def at_time(self, label: int) -> DecisionMatrix:
        """Slice out the alternatives x criteria matrix at one time label."""
        t = _time_index(label, self.time_labels, "time label")
        return DecisionMatrix(self.values[:, :, t], self.alternative_ids, self.criterion_ids)

    def to_records(self) -> Iterator[Record]:
        """Yield (alternative, criterion, time, value) cells in canonical order."""
        for i, alt in enumerate(self.alternative_ids):
            for j, crit in enumerate(self.criterion_ids):
                for t, label in enumerate(self.time_labels):
                    yield (alt, crit, label, float(self.values[i, j, t]))

    @classmethod
    def from_records(cls, records: Iterable[Record]) -> "DecisionTensor":
        """Build a dense tensor from (alternative, criterion, time, value) cells.

        Alternatives and criteria are ordered by first appearance, times
        ascending. Every combination must be present exactly once.
        """
        alternatives: list[str] = []
        criteria: list[str] = []
        times: set[int] = set()
        cells: dict[tuple[str, str, int], float] = {}
        for alt, crit, time, value in records:
            key = (alt, crit, int(time))
            if key in cells:
                raise ValidationError(f"duplicate cell {key}")
            cells[key] = float(value)
            if alt not in alternatives:
                alternatives.append(alt)
            if crit not in criteria:
                criteria.append(crit)
            times.add(int(time))
        time_labels = tuple(sorted(times))
        if not cells:
            raise ValidationError("no records supplied")
        missing = [
            (a, c, t)
            for a in alternatives
            for c in criteria
            for t in time_labels
            if (a, c, t) not in cells
        ]
        if missing:
            shown = ", ".join(map(str, missing[:10]))
            more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
            raise ValidationError(f"incomplete panel; missing cells: {shown}{more}")
        values = np.empty((len(alternatives), len(criteria), len(time_labels)))
        for i, a in enumerate(alternatives):
            for j, c in enumerate(criteria):
                for t, label in enumerate(time_labels):
                    values[i, j, t] = cells[(a, c, label)]
        return cls(values, tuple(alternatives), tuple(criteria), time_labels)


@dataclass(frozen=True)
class PredictionTensor:
    """Alternatives x criteria x horizon panel of predicted evaluations.

    horizon_labels continue the source tensor's time labels, one per
    prediction step.
    """

    values: np.ndarray
    alternative_ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]
    horizon_labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, 3, "prediction tensor"))
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "horizon_labels", _check_time_labels(self.horizon_labels))
        shape = (len(self.alternative_ids), len(self.criterion_ids), len(self.horizon_labels))
        if self.values.shape != shape:
            raise ValidationError(
                f"prediction tensor shape {self.values.shape} does not match labels {shape}"
            )
        if not np.isfinite(self.values).all():
            raise ValidationError("prediction tensor contains non-finite values")

    @property
    def n_alternatives(self) -> int:
        return len(self.alternative_ids)

    @property
    def n_criteria(self) -> int:
        return len(self.criterion_ids)

    @property
    def n_steps(self) -> int:
        return len(self.horizon_labels)

    def fiber(self, alternative, criterion) -> np.ndarray:
        i = _axis_index(alternative, self.alternative_ids, "alternative")
        j = _axis_index(criterion, self.criterion_ids, "criterion")
        return self.values[i, j, :].copy()

    @property
    def time_labels(self) -> tuple[int, ...]:
        """Alias for horizon_labels, mirroring the decision tensor API."""
        return self.horizon_labels

    def step_matrix(self, label: int) -> DecisionMatrix:
        """Slice out the predicted decision matrix for one horizon label."""
        t = _time_index(label, self.horizon_labels, "horizon label")
        return DecisionMatrix(self.values[:, :, t], self.alternative_ids, self.criterion_ids)

    def to_records(self) -> Iterator[Record]:
        for i, alt in enumerate(self.alternative_ids):
            for j, crit in enumerate(self.criterion_ids):
                for t, label in enumerate(self.horizon_labels):
                    yield (alt, crit, label, float(self.values[i, j, t]))


@dataclass(frozen=True)
class FeatureTensor:
    """Alternatives x criteria x features panel of fiber summaries.

    Entries are finite except for the documented coefficient-of-variation
    sentinel ``+inf`` (near-zero-mean series), which always compares as
    worst. NaN and -inf are rejected.
    """

    values: np.ndarray
    alternative_ids: tuple[str, ...]
    criterion_ids: tuple[str, ...]
    feature_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, 3, "feature tensor"))
        object.__setattr__(self, "alternative_ids", _check_labels(self.alternative_ids, "alternatives"))
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "feature_ids", _check_labels(self.feature_ids, "features"))
        shape = (len(self.alternative_ids), len(self.criterion_ids), len(self.feature_ids))
        if self.values.shape != shape:
            raise ValidationError(
                f"feature tensor shape {self.values.shape} does not match labels {shape}"
            )
        if np.isnan(self.values).any() or np.isneginf(self.values).any():
            raise ValidationError("feature tensor contains NaN or -inf values")

    @property
    def n_alternatives(self) -> int:
        return len(self.alternative_ids)

    @property
    def n_criteria(self) -> int:
        return len(self.criterion_ids)

    @property
    def n_features(self) -> int:
        return len(self.feature_ids)

    def value(self, alternative, criterion, feature) -> float:
        i = _axis_index(alternative, self.alternative_ids, "alternative")
        j = _axis_index(criterion, self.criterion_ids, "criterion")
        k = _axis_index(feature, self.feature_ids, "feature")
        return float(self.values[i, j, k])

    def to_records(self) -> Iterator[tuple[str, str, str, float]]:
        for i, alt in enumerate(self.alternative_ids):
            for j, crit in enumerate(self.criterion_ids):
                for k, feat in enumerate(self.feature_ids):
                    yield (alt, crit, feat, float(self.values[i, j, k]))


@dataclass(frozen=True)
class CriterionFeatureDirections:
    """Max/min orientation for every (criterion, feature) cell.

    ``base`` keeps the per-criterion direction used by matrix-mode
    aggregation; ``cells[j][l]`` is the orientation of criterion j under
    feature l.
    """

    criterion_ids: tuple[str, ...]
    feature_ids: tuple[str, ...]
    base: tuple[Direction, ...]
    cells: tuple[tuple[Direction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "criterion_ids", _check_labels(self.criterion_ids, "criteria"))
        object.__setattr__(self, "feature_ids", _check_labels(self.feature_ids, "features"))
        base = tuple(Direction.parse(d) for d in self.base)
        cells = tuple(tuple(Direction.parse(d) for d in row) for row in self.cells)
        if len(base) != len(self.criterion_ids):
            raise ValidationError("one base direction per criterion required")
        if len(cells) != len(self.criterion_ids) or any(
            len(row) != len(self.feature_ids) for row in cells
        ):
            raise ValidationError("direction cells must form a criteria x features grid")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "cells", cells)

    def direction(self, criterion, feature) -> Direction:
        j = _axis_index(criterion, self.criterion_ids, "criterion")
        k = _axis_index(feature, self.feature_ids, "feature")
        return self.cells[j][k]

    def signs(self) -> np.ndarray:
        """(m, w) array of +1/-1 cell orientations."""
        return np.array([[d.sign for d in row] for row in self.cells])

    def base_signs(self) -> np.ndarray:
        return np.array([d.sign for d in self.base])
