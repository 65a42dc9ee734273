"""Command-line interface: predict, rank and reproduce.

Exit codes: 0 on success, 1 for internal errors, 2 for input validation
errors. Identical invocations produce byte-identical outputs (no
timestamps or other run-dependent content is emitted).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import TensorankError, ValidationError
from .features import derive_directions, extract_features
from .ingest import (
    EMIT_FORMATS,
    RunConfig,
    emit_results,
    parse_config,
    parse_timeseries_csv,
    write_output,
)
from .mcda import promethee_matrix, promethee_pipeline, topsis_tensor
from .predict import predict_tensor
from .tensors import DecisionTensor

_SOURCES = ("predicted", "past-window", "current")


def _load_inputs(args) -> tuple[DecisionTensor, RunConfig]:
    panel = parse_timeseries_csv(args.data)
    config = parse_config(args.config)
    return panel, config


def _history(panel: DecisionTensor, config: RunConfig) -> DecisionTensor:
    if config.cutoff is None:
        return panel
    return panel.window(panel.time_labels[0], config.cutoff)


def cmd_predict(args) -> int:
    panel, config = _load_inputs(args)
    report = predict_tensor(_history(panel, config), config.filter_config, config.horizon)
    text = emit_results(report.predictions, args.format)
    write_output(text, args.out)
    if args.trace is not None:
        lines = []
        for t in report.traces:
            lines.append(
                json.dumps(
                    {
                        "alternative": t.alternative,
                        "criterion": t.criterion,
                        "lead": t.lead,
                        "weights": [float(v) for v in t.weights],
                        "final_error": float(t.errors[-1]),
                        "mean_squared_error": float(np.mean(t.errors**2)),
                        "prediction": t.prediction,
                    }
                )
            )
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def _ranking_block(panel: DecisionTensor, config: RunConfig, source: str):
    if source == "predicted":
        report = predict_tensor(_history(panel, config), config.filter_config, config.horizon)
        return report.predictions
    if source == "past-window":
        if config.past_window is None:
            raise ValidationError("config must set past_window to rank from a past window")
        return panel.window(*config.past_window)
    raise ValidationError(f"unknown source {source!r}")


def cmd_rank(args) -> int:
    panel, config = _load_inputs(args)
    method = args.method or config.method
    source = args.source

    if method == "promethee-matrix":
        if source == "current":
            year = config.cutoff if config.cutoff is not None else panel.time_labels[-1]
            matrix = panel.at_time(year)
        elif source == "predicted":
            block = _ranking_block(panel, config, source)
            year = args.year if args.year is not None else block.time_labels[0]
            matrix = block.step_matrix(year)
        else:
            raise ValidationError(
                "promethee-matrix ranks a single time slice; use --source current or "
                "--source predicted (optionally with --year)"
            )
        weights = None
        if config.weights is not None:
            weights = {
                c: float(sum(v.values()) if hasattr(v, "values") else v)
                for c, v in config.weights.items()
            }
        result = promethee_matrix(matrix, config.directions, weights)
        write_output(emit_results(result, args.format), args.out)
        return 0

    if source == "current":
        raise ValidationError(
            "tensor methods need a time window; --source current only supports "
            "--method promethee-matrix"
        )
    block = _ranking_block(panel, config, source)
    features = extract_features(block, config.features)
    directions = derive_directions(config.directions, config.features, config.direction_overrides)
    weights = config.weight_scheme(features.criterion_ids, features.feature_ids)
    if method == "topsis-tensor":
        result = topsis_tensor(features, directions, weights)
        pi = None
    else:
        run = promethee_pipeline(features, directions, weights)
        result = run.ranking
        pi = run.preference
    write_output(emit_results(result, args.format), args.out)
    if args.emit_intermediates is not None:
        outdir = Path(args.emit_intermediates)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "features.csv").write_text(emit_results(features, "csv"), encoding="utf-8")
        if pi is not None:
            (outdir / "preference.csv").write_text(emit_results(pi, "csv"), encoding="utf-8")
    return 0


def cmd_reproduce(args) -> int:
    from .experiments import format_report, load_country_panel, run_golden

    if args.data is not None:
        panel = parse_timeseries_csv(args.data)
    else:
        panel = load_country_panel()
    report = run_golden(panel)
    text = format_report(report)
    if args.out_dir is not None:
        outdir = Path(args.out_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.txt").write_text(text, encoding="utf-8")
        rows = ["strategy,policy,matched,tau,ordering,expected"]
        for o in report.outcomes:
            rows.append(
                f"{o.case.strategy},{o.case.policy},{o.matched},{o.tau!r},"
                f"{' > '.join(o.result.ordering)},{' > '.join(o.case.expected)}"
            )
        (outdir / "rankings.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        (outdir / "past_features.csv").write_text(
            emit_results(report.past_features, "csv"), encoding="utf-8"
        )
        (outdir / "predicted_features.csv").write_text(
            emit_results(report.predicted_features, "csv"), encoding="utf-8"
        )
        if args.plot:
            _write_plots(panel, report, outdir)
    else:
        if args.plot:
            raise ValidationError("--plot requires --out-dir")
        sys.stdout.write(text)
    # mismatches are reported, not fatal: the report itself is the product
    return 0


def _write_plots(panel, report, outdir: Path) -> None:
    try:
        import matplotlib
    except ImportError as exc:
        raise ValidationError(
            "plotting requires matplotlib; install the 'plot' extra"
        ) from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .experiments import CUTOFF_YEAR, predict_study_panel, run_strategy

    result = run_strategy("predicted-features", panel)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    order = list(result.ordering)
    scores = [result.score_of(a) for a in order]
    ax.bar(order, scores, color="#4878a8")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_ylabel("net flow")
    ax.set_title("ranking from forecast features")
    fig.tight_layout()
    fig.savefig(outdir / "net_flows.png", dpi=150)
    plt.close(fig)

    predictions = predict_study_panel(panel)
    n, m = len(panel.alternative_ids), len(panel.criterion_ids)
    fig, axes = plt.subplots(n, m, figsize=(3.2 * m, 1.8 * n), sharex=True)
    years = list(panel.time_labels)
    for i, alt in enumerate(panel.alternative_ids):
        for j, crit in enumerate(panel.criterion_ids):
            ax = axes[i][j]
            ax.plot(years, panel.fiber(alt, crit), linewidth=0.9, label="observed")
            ax.plot(
                list(predictions.time_labels),
                predictions.fiber(alt, crit),
                linewidth=0.9,
                linestyle="--",
                label="forecast",
            )
            ax.axvline(CUTOFF_YEAR, color="gray", linewidth=0.6, linestyle=":")
            if i == 0:
                ax.set_title(crit, fontsize=9)
            if j == 0:
                ax.set_ylabel(alt, fontsize=8)
            ax.tick_params(labelsize=7)
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(outdir / "forecasts.png", dpi=150)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorank",
        description="Rank alternatives by forecasting each criterion's time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="forecast every (alternative, criterion) series")
    p.add_argument("--data", required=True, help="long-format CSV panel")
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--format", default="csv", choices=EMIT_FORMATS)
    p.add_argument("--trace", default=None, help="write per-fiber filter traces (JSONL)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("rank", help="rank alternatives from a data source")
    p.add_argument("--data", required=True, help="long-format CSV panel")
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--method", default=None, choices=("promethee-tensor", "promethee-matrix", "topsis-tensor"))
    p.add_argument("--source", required=True, choices=_SOURCES)
    p.add_argument("--year", type=int, default=None, help="year to slice for promethee-matrix on predictions")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--format", default="table", choices=EMIT_FORMATS)
    p.add_argument("--emit-intermediates", default=None, metavar="DIR", help="also write features and preference matrix")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("reproduce", help="re-run the bundled country study and compare")
    p.add_argument("--data", default=None, help="panel CSV (default: bundled study data)")
    p.add_argument("--out-dir", default=None, help="write report files here instead of stdout")
    p.add_argument("--plot", action="store_true", help="also write charts (needs matplotlib)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"tensorank: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"tensorank: {exc}", file=sys.stderr)
        return 2
    except TensorankError as exc:
        print(f"tensorank: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
