"""Adaptive one-step-ahead forecasting of decision tensor fibers.

Each (alternative, criterion) history is treated as an independent scalar
time series. A linear filter over the last ``order`` observations is
trained recursively, then applied once per horizon step with a
direct strategy: the filter for lead time lag is trained on pairs
(window ending at t - lag, value at t) and predicts from the final
observed window, so no predicted value is ever fed back as input.

Two recursions are provided: exponentially weighted recursive least
squares (default) and normalized least mean squares (for comparison).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .errors import NumericError, ValidationError
from .tensors import DecisionTensor, PredictionTensor, _readonly_array

ALGORITHMS = ("rls", "nlms")


@dataclass(frozen=True)
class FilterConfig:
    """Hyper-parameters shared by every fiber's filter.

    ``forgetting_factor`` may be a scalar or a per-criterion mapping;
    unlisted criteria fall back to ``default_forgetting``. The mapping
    form only affects RLS; NLMS uses ``step_size`` and ``epsilon``.
    """

    algorithm: str = "rls"
    order: int = 2
    forgetting_factor: Union[float, Mapping[str, float]] = 1.0
    default_forgetting: float = 1.0
    init_delta: float = 1e-2
    step_size: float = 0.5
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.order < 1:
            raise ValidationError("filter order must be at least 1")
        values = (
            [self.forgetting_factor]
            if isinstance(self.forgetting_factor, (int, float))
            else list(self.forgetting_factor.values()) + [self.default_forgetting]
        )
        for rho in values:
            if not 0.0 < float(rho) <= 1.0:
                raise ValidationError(f"forgetting factor must lie in (0, 1], got {rho!r}")
        if self.init_delta <= 0:
            raise ValidationError("init_delta must be positive")
        if self.step_size <= 0:
            raise ValidationError("step_size must be positive")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")

    def forgetting_for(self, criterion: str) -> float:
        if isinstance(self.forgetting_factor, (int, float)):
            return float(self.forgetting_factor)
        return float(self.forgetting_factor.get(criterion, self.default_forgetting))


class RlsFilter:
    """Recursive least squares with exponential forgetting.

    State is the coefficient vector ``w`` and the inverse of the
    weighted autocorrelation matrix ``P``, started at (1/delta) I.
    """

    def __init__(self, order: int, forgetting: float = 1.0, init_delta: float = 1e-2):
        if order < 1:
            raise ValidationError("filter order must be at least 1")
        if not 0.0 < forgetting <= 1.0:
            raise ValidationError("forgetting factor must lie in (0, 1]")
        self.order = order
        self.forgetting = forgetting
        self.w = np.zeros(order)
        self.P = np.eye(order) / init_delta

    def update(self, x: np.ndarray, desired: float) -> float:
        """Consume one (regressor, target) pair; return the a-priori error."""
        x = np.asarray(x, dtype=float)
        Px = self.P @ x
        denom = self.forgetting + float(x @ Px)
        gain = Px / denom
        err = desired - float(self.w @ x)
        self.w = self.w + gain * err
        P = (self.P - np.outer(gain, Px)) / self.forgetting
        self.P = (P + P.T) / 2.0  # keep the recursion symmetric against drift
        return err

    def predict(self, x: np.ndarray) -> float:
        return float(self.w @ np.asarray(x, dtype=float))


class NlmsFilter:
    """Normalized least mean squares with step size mu."""

    def __init__(self, order: int, step_size: float = 0.5, epsilon: float = 1e-6):
        if order < 1:
            raise ValidationError("filter order must be at least 1")
        if step_size <= 0 or epsilon <= 0:
            raise ValidationError("step_size and epsilon must be positive")
        self.order = order
        self.step_size = step_size
        self.epsilon = epsilon
        self.w = np.zeros(order)

    def update(self, x: np.ndarray, desired: float) -> float:
        x = np.asarray(x, dtype=float)
        err = desired - float(self.w @ x)
        self.w = self.w + (self.step_size * err / (self.epsilon + float(x @ x))) * x
        return err

    def predict(self, x: np.ndarray) -> float:
        return float(self.w @ np.asarray(x, dtype=float))


def _make_filter(config: FilterConfig, criterion: str):
    if config.algorithm == "rls":
        return RlsFilter(config.order, config.forgetting_for(criterion), config.init_delta)
    return NlmsFilter(config.order, config.step_size, config.epsilon)


def lagged_regressors(history: np.ndarray, order: int, lead: int) -> tuple[np.ndarray, np.ndarray]:
    """Training pairs for a given lead time, newest sample first.

    Row t of the design matrix is [h(t - lead), ..., h(t - lead - order + 1)]
    and the target is h(t), for every t where the window fits. The final
    row of the returned design matrix ends at the last observation, so
    ``design[-1]`` is NOT a training row; it is the query regressor for
    predicting ``lead`` steps past the end of the history.
    """
    h = np.asarray(history, dtype=float)
    if h.ndim != 1:
        raise ValidationError("history must be 1-dimensional")
    if lead < 1:
        raise ValidationError("lead must be at least 1")
    n = h.size
    first_target = lead + order - 1  # zero-based index of the first predictable sample
    if n < first_target + 1:
        raise ValidationError(
            f"history of length {n} too short for order {order} at lead {lead}; "
            f"need at least {first_target + 1} observations"
        )
    targets = h[first_target:]
    # training windows end at t - lead per target t; the query window ends
    # at the last observation (not contiguous with training when lead > 1)
    ends = np.concatenate([np.arange(order - 1, n - lead), [n - 1]])
    idx = ends[:, None] - np.arange(order)[None, :]
    design = h[idx]
    return design, targets


@dataclass(frozen=True)
class FiberTrace:
    """Training record of a single (alternative, criterion, lead) filter."""

    alternative: str
    criterion: str
    lead: int
    weights: np.ndarray
    errors: np.ndarray
    prediction: float

    def __post_init__(self):
        object.__setattr__(self, "weights", _readonly_array(self.weights, 1, "weights"))
        object.__setattr__(self, "errors", _readonly_array(self.errors, 1, "errors"))


@dataclass(frozen=True)
class PredictionReport:
    """A prediction tensor plus per-fiber training traces."""

    predictions: PredictionTensor
    traces: tuple[FiberTrace, ...] = field(repr=False)
    config: FilterConfig

    def trace(self, alternative: str, criterion: str, lead: int) -> FiberTrace:
        for t in self.traces:
            if (t.alternative, t.criterion, t.lead) == (alternative, criterion, lead):
                return t
        raise ValidationError(f"no trace for ({alternative!r}, {criterion!r}, lead={lead})")


def predict_fiber(
    history: np.ndarray,
    config: FilterConfig,
    horizon: int,
    criterion: str = "",
) -> tuple[np.ndarray, list[tuple[int, np.ndarray, np.ndarray, float]]]:
    """Forecast ``horizon`` steps past the end of one scalar series.

    Returns the predictions and, per lead, the trained weights, the
    a-priori error sequence and the point forecast.
    """
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    out = np.empty(horizon)
    details = []
    for lead in range(1, horizon + 1):
        design, targets = lagged_regressors(history, config.order, lead)
        filt = _make_filter(config, criterion)
        errors = np.empty(targets.size)
        for row in range(targets.size):
            errors[row] = filt.update(design[row], targets[row])
        value = filt.predict(design[-1])
        if not np.isfinite(value):
            raise NumericError(
                f"non-finite forecast at lead {lead}",
                context=f"criterion {criterion!r}" if criterion else None,
            )
        out[lead - 1] = value
        details.append((lead, filt.w.copy(), errors, value))
    return out, details


def predict_tensor(
    panel: DecisionTensor,
    config: Optional[FilterConfig] = None,
    horizon: int = 1,
    keep_traces: bool = True,
) -> PredictionReport:
    """Forecast every (alternative, criterion) fiber of a decision tensor.

    Horizon labels continue the panel's time labels with unit stride.
    """
    config = config or FilterConfig()
    n, m, _ = panel.values.shape
    values = np.empty((n, m, horizon))
    traces: list[FiberTrace] = []
    for i, alt in enumerate(panel.alternative_ids):
        for j, crit in enumerate(panel.criterion_ids):
            try:
                fiber_pred, details = predict_fiber(
                    panel.values[i, j, :], config, horizon, criterion=crit
                )
            except ValidationError as exc:
                raise ValidationError(f"fiber ({alt!r}, {crit!r}): {exc}") from exc
            values[i, j, :] = fiber_pred
            if keep_traces:
                for lead, w, errors, value in details:
                    traces.append(FiberTrace(alt, crit, lead, w, errors, value))
    last = panel.time_labels[-1]
    labels = tuple(last + k for k in range(1, horizon + 1))
    predictions = PredictionTensor(values, panel.alternative_ids, panel.criterion_ids, labels)
    return PredictionReport(predictions, tuple(traces), config)
