"""Input parsing (long-format CSV panels, YAML run configs) and output emission.

The CSV contract is a long/tidy layout with the exact header
``alternative,criterion,time,value`` and one observation per row. Every
(alternative, criterion, time) combination must appear exactly once;
diagnostics carry 1-based line numbers (the header is line 1).
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping, Optional, Sequence, Union

import numpy as np
import yaml

from .errors import ValidationError
from .mcda import PreferenceMatrix, RankResult, WeightScheme
from .predict import ALGORITHMS, FilterConfig
from .tensors import (
    CriterionFeatureDirections,
    DecisionMatrix,
    DecisionTensor,
    Direction,
    FeatureTensor,
    PredictionTensor,
)

CSV_HEADER = ("alternative", "criterion", "time", "value")


def parse_timeseries_csv(source: Union[str, Path, IO[str]]) -> DecisionTensor:
    """Load a long-format panel CSV into a decision tensor.

    Alternatives and criteria keep first-appearance order; time labels are
    sorted ascending. Raises ValidationError with line numbers for header
    mismatches, short/long rows, non-integer times, non-numeric or
    non-finite values, duplicate cells and incomplete panels.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", newline="", encoding="utf-8") as fh:
            return _parse_rows(csv.reader(fh), str(source))
    return _parse_rows(csv.reader(source), getattr(source, "name", "<stream>"))


def _parse_rows(reader, origin: str) -> DecisionTensor:
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{origin}: empty file; expected header {','.join(CSV_HEADER)}")
    if tuple(h.strip().lower() for h in header) != CSV_HEADER:
        raise ValidationError(
            f"{origin}: line 1: bad header {header!r}; expected {','.join(CSV_HEADER)}"
        )
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise ValidationError(f"{origin}: line {lineno}: expected 4 fields, got {len(row)}")
        alt, crit, time_s, value_s = (cell.strip() for cell in row)
        if not alt or not crit:
            raise ValidationError(f"{origin}: line {lineno}: empty alternative or criterion id")
        try:
            time = int(time_s)
        except ValueError:
            raise ValidationError(f"{origin}: line {lineno}: non-integer time {time_s!r}")
        try:
            value = float(value_s)
        except ValueError:
            raise ValidationError(f"{origin}: line {lineno}: non-numeric value {value_s!r}")
        if not np.isfinite(value):
            raise ValidationError(f"{origin}: line {lineno}: non-finite value {value_s!r}")
        records.append((alt, crit, time, value, lineno))
    if not records:
        raise ValidationError(f"{origin}: no data rows")
    seen: dict[tuple[str, str, int], int] = {}
    for alt, crit, time, _, lineno in records:
        key = (alt, crit, time)
        if key in seen:
            raise ValidationError(
                f"{origin}: line {lineno}: duplicate cell {key!r} "
                f"(first seen at line {seen[key]})"
            )
        seen[key] = lineno
    try:
        return DecisionTensor.from_records((r[:4] for r in records))
    except ValidationError as exc:
        raise ValidationError(f"{origin}: {exc}") from exc


def write_timeseries_csv(panel: DecisionTensor, target: Union[str, Path, IO[str]]) -> None:
    """Write a decision tensor back to the long CSV layout (full precision)."""

    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for alt, crit, time, value in panel.to_records():
            writer.writerow([alt, crit, time, repr(value)])

    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(target)


_CONFIG_KEYS = {
    "cutoff",
    "horizon",
    "past_window",
    "method",
    "features",
    "directions",
    "direction_overrides",
    "weights",
    "filter",
}
_FILTER_KEYS = {
    "algorithm",
    "order",
    "forgetting_factor",
    "step_size",
    "regularization",
    "init_delta",
}
_METHODS = ("promethee-tensor", "promethee-matrix", "topsis-tensor")


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings for the prediction + ranking pipeline."""

    directions: dict[str, Direction]
    cutoff: Optional[int] = None
    horizon: int = 1
    past_window: Optional[tuple[int, int]] = None
    method: str = "promethee-tensor"
    features: tuple[str, ...] = ("average", "slope", "cv")
    direction_overrides: dict[str, dict[str, Direction]] = field(default_factory=dict)
    weights: Optional[dict] = None
    filter_config: FilterConfig = field(default_factory=FilterConfig)

    def weight_scheme(self, criterion_ids: Sequence[str], feature_ids: Sequence[str]) -> WeightScheme:
        """Materialize the configured weights against concrete axes."""
        if self.weights is None:
            return WeightScheme.uniform(criterion_ids, feature_ids)
        grid = np.empty((len(criterion_ids), len(feature_ids)))
        for j, crit in enumerate(criterion_ids):
            if crit not in self.weights:
                raise ValidationError(f"weights missing criterion {crit!r}")
            cell = self.weights[crit]
            if isinstance(cell, Mapping):
                for l, feat in enumerate(feature_ids):
                    if feat not in cell:
                        raise ValidationError(f"weights[{crit!r}] missing feature {feat!r}")
                    grid[j, l] = float(cell[feat])
            else:
                grid[j, :] = float(cell) / len(feature_ids)
        total = grid.sum()
        if total <= 0:
            raise ValidationError("weights must not all be zero")
        return WeightScheme(tuple(criterion_ids), tuple(feature_ids), grid / total)


def parse_config(source: Union[str, Path, IO[str], Mapping]) -> RunConfig:
    """Load and validate a YAML run config (or an equivalent mapping)."""
    if isinstance(source, Mapping):
        raw, origin = dict(source), "<mapping>"
    else:
        if isinstance(source, (str, Path)):
            with open(source, "r", encoding="utf-8") as fh:
                raw = yaml.safe_load(fh)
            origin = str(source)
        else:
            raw = yaml.safe_load(source)
            origin = getattr(source, "name", "<stream>")
        if raw is None:
            raw = {}
        if not isinstance(raw, Mapping):
            raise ValidationError(f"{origin}: config must be a mapping, got {type(raw).__name__}")
        raw = dict(raw)
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ValidationError(
            f"{origin}: unknown config keys {sorted(unknown)}; allowed: {sorted(_CONFIG_KEYS)}"
        )
    if "directions" not in raw or not isinstance(raw["directions"], Mapping) or not raw["directions"]:
        raise ValidationError(f"{origin}: 'directions' mapping (criterion -> max/min) is required")
    directions = {str(k): Direction.parse(v) for k, v in raw["directions"].items()}

    overrides: dict[str, dict[str, Direction]] = {}
    for crit, cells in (raw.get("direction_overrides") or {}).items():
        if not isinstance(cells, Mapping):
            raise ValidationError(f"{origin}: direction_overrides[{crit!r}] must be a mapping")
        overrides[str(crit)] = {str(f): Direction.parse(d) for f, d in cells.items()}

    method = str(raw.get("method", "promethee-tensor"))
    if method not in _METHODS:
        raise ValidationError(f"{origin}: unknown method {method!r}; expected one of {_METHODS}")

    features = raw.get("features", ["average", "slope", "cv"])
    if isinstance(features, str) or not isinstance(features, Sequence) or not features:
        raise ValidationError(f"{origin}: 'features' must be a non-empty list of feature ids")

    horizon = raw.get("horizon", 1)
    if not isinstance(horizon, int) or horizon < 1:
        raise ValidationError(f"{origin}: horizon must be a positive integer")

    cutoff = raw.get("cutoff")
    if cutoff is not None and not isinstance(cutoff, int):
        raise ValidationError(f"{origin}: cutoff must be an integer time label")

    past_window = raw.get("past_window")
    if past_window is not None:
        ok = (
            isinstance(past_window, Sequence)
            and not isinstance(past_window, str)
            and len(past_window) == 2
            and all(isinstance(v, int) for v in past_window)
            and past_window[0] <= past_window[1]
        )
        if not ok:
            raise ValidationError(f"{origin}: past_window must be [first, last] integer labels")
        past_window = (past_window[0], past_window[1])

    filt_raw = dict(raw.get("filter") or {})
    unknown = set(filt_raw) - _FILTER_KEYS
    if unknown:
        raise ValidationError(
            f"{origin}: unknown filter keys {sorted(unknown)}; allowed: {sorted(_FILTER_KEYS)}"
        )
    rho = filt_raw.get("forgetting_factor", 1.0)
    if isinstance(rho, Mapping):
        rho = {str(k): float(v) for k, v in rho.items()}
    else:
        rho = float(rho)
    try:
        filter_config = FilterConfig(
            algorithm=str(filt_raw.get("algorithm", "rls")),
            order=int(filt_raw.get("order", 2)),
            forgetting_factor=rho,
            init_delta=float(filt_raw.get("init_delta", filt_raw.get("regularization", 1e-2))),
            step_size=float(filt_raw.get("step_size", 0.5)),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{origin}: bad filter settings: {exc}") from exc

    weights = raw.get("weights")
    if weights is not None and not isinstance(weights, Mapping):
        raise ValidationError(f"{origin}: weights must be a mapping keyed by criterion")

    return RunConfig(
        directions=directions,
        cutoff=cutoff,
        horizon=horizon,
        past_window=past_window,
        method=method,
        features=tuple(str(f) for f in features),
        direction_overrides=overrides,
        weights=dict(weights) if weights is not None else None,
        filter_config=filter_config,
    )


EMIT_FORMATS = ("table", "csv", "jsonl")


def _fmt(value: float, fmt: str) -> str:
    if fmt == "table":
        return "inf" if np.isposinf(value) else f"{value:.3f}"
    return repr(float(value))


def emit_results(obj, fmt: str = "table", stream: Optional[IO[str]] = None) -> str:
    """Render a result object to one of the supported formats.

    Handles RankResult, FeatureTensor, PredictionTensor, DecisionMatrix,
    DecisionTensor and PreferenceMatrix. Returns the rendered text and, if
    a stream is given, also writes it there.
    """
    if fmt not in EMIT_FORMATS:
        raise ValidationError(f"unknown output format {fmt!r}; expected one of {EMIT_FORMATS}")
    if isinstance(obj, RankResult):
        text = _emit_ranking(obj, fmt)
    elif isinstance(obj, FeatureTensor):
        text = _emit_cells(
            obj.to_records(), ("alternative", "criterion", "feature", "value"), fmt
        )
    elif isinstance(obj, (PredictionTensor, DecisionTensor)):
        text = _emit_cells(obj.to_records(), CSV_HEADER, fmt)
    elif isinstance(obj, DecisionMatrix):
        records = [
            (alt, crit, float(obj.values[i, j]))
            for i, alt in enumerate(obj.alternative_ids)
            for j, crit in enumerate(obj.criterion_ids)
        ]
        text = _emit_cells(records, ("alternative", "criterion", "value"), fmt)
    elif isinstance(obj, PreferenceMatrix):
        records = [
            (a, b, float(obj.values[i, k]))
            for i, a in enumerate(obj.alternative_ids)
            for k, b in enumerate(obj.alternative_ids)
        ]
        text = _emit_cells(records, ("alternative", "over", "preference"), fmt)
    else:
        raise ValidationError(f"cannot emit object of type {type(obj).__name__}")
    if stream is not None:
        stream.write(text)
    return text


def _emit_ranking(result: RankResult, fmt: str) -> str:
    rank_of = {a: r + 1 for r, a in enumerate(result.ordering)}
    rows = [
        (rank_of[alt], alt, float(result.scores[result.alternative_ids.index(alt)]))
        for alt in result.ordering
    ]
    if fmt == "jsonl":
        out = io.StringIO()
        for rank, alt, score in rows:
            json.dump({"rank": rank, "alternative": alt, "score": score}, out)
            out.write("\n")
        if result.tie_groups:
            json.dump({"tie_groups": [list(g) for g in result.tie_groups]}, out)
            out.write("\n")
        return out.getvalue()
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["rank", "alternative", "score"])
        for rank, alt, score in rows:
            writer.writerow([rank, alt, repr(score)])
        return out.getvalue()
    width = max(len("alternative"), *(len(a) for a in result.alternative_ids))
    lines = [f"{'rank':>4}  {'alternative':<{width}}  {'score':>12}"]
    for rank, alt, score in rows:
        lines.append(f"{rank:>4}  {alt:<{width}}  {score:>12.6f}")
    if result.tie_groups:
        tied = "; ".join(", ".join(g) for g in result.tie_groups)
        lines.append(f"ties (input order kept): {tied}")
    return "\n".join(lines) + "\n"


def _emit_cells(records, header: Sequence[str], fmt: str) -> str:
    records = list(records)
    if fmt == "jsonl":
        out = io.StringIO()
        for rec in records:
            json.dump({k: (float(v) if isinstance(v, float) else v) for k, v in zip(header, rec)}, out)
            out.write("\n")
        return out.getvalue()
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for rec in records:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in rec])
        return out.getvalue()
    widths = [
        max(len(str(h)), *(len(_cell_str(rec[col], "table")) for rec in records))
        for col, h in enumerate(header)
    ]
    lines = ["  ".join(f"{h:<{w}}" for h, w in zip(header, widths))]
    for rec in records:
        lines.append("  ".join(f"{_cell_str(v, 'table'):<{w}}" for v, w in zip(rec, widths)))
    return "\n".join(lines) + "\n"


def _cell_str(value, fmt: str) -> str:
    if isinstance(value, float):
        return _fmt(value, fmt)
    return str(value)


def write_output(text: str, path: Optional[Union[str, Path]]) -> None:
    """Write rendered text to a file, or stdout when path is None or '-'."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
