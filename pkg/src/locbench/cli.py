"""Batch command-line front end.

Every subcommand echoes its resolved configuration (defaults made
explicit), derives all randomness from --seed, and writes reports
atomically, so identical invocations produce byte-identical files.

Exit codes: 0 success, 1 input or validation problem, 2 training
divergence.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import render
from .activity import load_activity_models, bundled_models_path, validate_activity_model
from .data import (
    ParseError,
    SchemaError,
    SplitConfig,
    ValidationError,
    parse_beacon_csv,
    parse_imu_csv,
    parse_rssi_csv,
    synthetic_imu_dataset,
    synthetic_rssi_dataset,
    synthetic_walk_dataset,
    write_csv,
)
from .evaluation import horizontal_error, rmse
from .learners import CLASSIFIER_FAMILIES, FAMILIES, LearnerSpec, TrainingDivergedError
from .pipelines import (
    PipelineConfig,
    compare_models,
    default_comparison_specs,
    run_coords,
    run_zone_imu,
    run_zone_rssi,
)

OUT_DIR_ENV = "LOCBENCH_OUT_DIR"


class CliUsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("formatter_class", argparse.ArgumentDefaultsHelpFormatter)
        super().__init__(*args, **kwargs)

    def error(self, message):  # reject unknown flags with exit code 1, not 2
        raise CliUsageError(message)


def _add_common(parser, default_ratio: float | None = None) -> None:
    parser.add_argument("--seed", type=int, default=42, help="master random seed")
    parser.add_argument(
        "--out-dir",
        default=None,
        help=f"report directory (default: ${OUT_DIR_ENV} or ./out)",
    )
    parser.add_argument(
        "--format",
        choices=("json", "csv", "md"),
        default="md",
        help="console summary style; report files are always written in full",
    )
    if default_ratio is not None:
        parser.add_argument(
            "--train-ratio", type=float, default=default_ratio, help="training fraction"
        )


def _add_learner_flags(parser, default_model: str, choices=FAMILIES) -> None:
    parser.add_argument(
        "--model", choices=choices, default=default_model, help="learner family"
    )
    parser.add_argument("--k", type=int, default=None, help="neighbors (knn)")
    parser.add_argument("--trees", type=int, default=None, help="ensemble size")
    parser.add_argument("--depth", type=int, default=None, help="maximum tree depth")
    parser.add_argument("--rate", type=float, default=None, help="learning rate")
    parser.add_argument(
        "--layers", default=None, help="hidden layer sizes, comma separated (ann/deep_learning)"
    )
    parser.add_argument("--c", type=float, default=None, help="penalty weight (svr)")
    parser.add_argument("--epsilon", type=float, default=None, help="insensitive band (svr)")
    parser.add_argument("--gamma", type=float, default=None, help="rbf width (svr)")


def build_parser() -> _Parser:
    parser = _Parser(prog="locbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zone-rssi", help="classify zones from scanner readings")
    p.add_argument("--data", required=True, help="rssi-schema CSV file")
    _add_learner_flags(p, "knn", choices=CLASSIFIER_FAMILIES)
    _add_common(p, default_ratio=0.8)

    p = sub.add_parser("zone-imu", help="classify zones from motion channels")
    p.add_argument("--data", required=True, help="imu-schema CSV file")
    p.add_argument(
        "--window",
        type=int,
        default=None,
        help="aggregate this many consecutive samples into mean+std features",
    )
    _add_learner_flags(p, "random_forest", choices=CLASSIFIER_FAMILIES)
    _add_common(p, default_ratio=0.7)

    p = sub.add_parser("coords", help="regress coordinates from beacon distances")
    p.add_argument("--data", required=True, help="beacon-schema CSV file")
    _add_learner_flags(p, "random_forest")
    _add_common(p, default_ratio=0.7)

    p = sub.add_parser("compare", help="run all learner families over shared splits")
    p.add_argument("--data", required=True, help="beacon-schema CSV file")
    p.add_argument(
        "--seeds", default="42", help="seed list: '1..10', '3,7,11', or a single value"
    )
    p.add_argument(
        "--families",
        default=None,
        help=f"comma-separated subset of: {','.join(FAMILIES)}",
    )
    _add_common(p, default_ratio=0.7)

    p = sub.add_parser("validate-activities", help="check activity model files")
    p.add_argument(
        "--file", default=None, help="model file (default: the bundled fixtures)"
    )
    _add_common(p)

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--kind", choices=("beacon", "rssi", "imu"), default="beacon")
    p.add_argument("--rows", type=int, default=250)
    p.add_argument("--noise-sigma", type=float, default=0.05, help="distance noise in meters")
    p.add_argument("--out", required=True, help="output CSV path")
    _add_common(p)

    p = sub.add_parser("metrics", help="per-axis RMSE and horizontal error from error files")
    p.add_argument("--errors-x", required=True, help="CSV of per-row x errors in cm")
    p.add_argument("--errors-y", required=True, help="CSV of per-row y errors in cm")
    _add_common(p)

    return parser


def _resolve_out_dir(args) -> str:
    return args.out_dir or os.environ.get(OUT_DIR_ENV) or "out"


def _learner_spec(args) -> LearnerSpec:
    params = {}
    for key in ("k", "trees", "depth", "rate", "c", "epsilon", "gamma"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if getattr(args, "layers", None):
        params["layers"] = tuple(int(v) for v in args.layers.split(",") if v)
    return LearnerSpec(family=args.model, seed=args.seed, params=params)


def _echo_config(args, extra: dict | None = None) -> None:
    resolved = dict(vars(args))
    resolved.pop("command", None)
    if "out_dir" in resolved:
        resolved["out_dir"] = _resolve_out_dir(args)
    if extra:
        resolved.update(extra)
    print(f"locbench {args.command}")
    for key, value in sorted(resolved.items()):
        print(f"  {key} = {'none' if value is None else value}")


def _parse_seeds(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        start, _, stop = text.partition("..")
        return tuple(range(int(start), int(stop) + 1))
    return tuple(int(v) for v in text.split(",") if v)


def _read_error_column(path) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            cell = line.strip().split(",")[0]
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                if line_no == 1:  # tolerate a header line
                    continue
                raise ParseError(f"row {line_no}: non-numeric error value {cell!r}") from None
    if not values:
        raise ValidationError(f"{path}: no numeric error values found")
    return values


def _print_summary(args, payload: dict, table_md: str | None = None) -> None:
    if args.format == "json":
        print(render.to_json(payload), end="")
    elif table_md is not None and args.format == "md":
        print(table_md, end="")
    else:
        for key, value in sorted(payload.items()):
            if isinstance(value, (int, float, str)):
                print(f"{key}: {value}")


def _cmd_zone(args, kind: str) -> int:
    parse = parse_rssi_csv if kind == "rssi" else parse_imu_csv
    dataset = parse(args.data)
    config = PipelineConfig(
        learner=_learner_spec(args),
        split=SplitConfig(train_ratio=args.train_ratio, seed=args.seed, stratified=True),
        window=getattr(args, "window", None),
    )
    _echo_config(args, {"learner": config.learner.to_text()})
    result = run_zone_rssi(dataset, config) if kind == "rssi" else run_zone_imu(dataset, config)

    out_dir = _resolve_out_dir(args)
    payload = render.zone_report_payload(result)
    render.write_atomic(os.path.join(out_dir, "report.json"), render.to_json(payload))
    render.write_atomic(
        os.path.join(out_dir, "predictions.csv"), render.zone_predictions_csv(result.rows)
    )
    confusion = render.confusion_markdown(result.report)
    render.write_atomic(os.path.join(out_dir, "confusion.md"), confusion)

    print(f"accuracy: {render.pct(result.report.accuracy)}  (n={result.report.matrix.total})")
    _print_summary(args, payload, confusion)
    print(f"reports written to {out_dir}")
    return 0


def _echo_notes(dataset) -> None:
    for note in dataset.ingest_notes:
        print(f"note: {note}")


def _cmd_coords(args) -> int:
    dataset = parse_beacon_csv(args.data)
    _echo_notes(dataset)
    config = PipelineConfig(
        learner=_learner_spec(args),
        split=SplitConfig(train_ratio=args.train_ratio, seed=args.seed, stratified=False),
    )
    _echo_config(args, {"learner": config.learner.to_text()})
    result = run_coords(dataset, config)

    out_dir = _resolve_out_dir(args)
    payload = render.coords_report_payload(result)
    render.write_atomic(os.path.join(out_dir, "report.json"), render.to_json(payload))
    render.write_atomic(
        os.path.join(out_dir, "predictions_x.csv"),
        render.coord_predictions_csv(result.rows_x, "x"),
    )
    render.write_atomic(
        os.path.join(out_dir, "predictions_y.csv"),
        render.coord_predictions_csv(result.rows_y, "y"),
    )

    report = result.report
    print(
        f"rmse_x: {report.rmse_x:.2f} cm  rmse_y: {report.rmse_y:.2f} cm  "
        f"horizontal_error: {report.horizontal_error:.2f} cm  (n={report.n})"
    )
    if result.importance_x is not None:
        weights = ", ".join(f"{k}={v:.3f}" for k, v in result.importance_x.weights.items())
        print(f"feature importance (x): {weights}")
        weights = ", ".join(f"{k}={v:.3f}" for k, v in result.importance_y.weights.items())
        print(f"feature importance (y): {weights}")
    if args.format == "json":
        summary = {k: v for k, v in payload.items() if not k.startswith("errors_")}
        print(render.to_json(summary), end="")
    print(f"reports written to {out_dir}")
    return 0


def _cmd_compare(args) -> int:
    dataset = parse_beacon_csv(args.data)
    _echo_notes(dataset)
    seeds = _parse_seeds(args.seeds)
    if args.families:
        families = tuple(f.strip() for f in args.families.split(",") if f.strip())
        specs = tuple(LearnerSpec(family=f) for f in families)
    else:
        specs = default_comparison_specs()
    _echo_config(args, {"resolved_seeds": list(seeds)})
    result = compare_models(dataset, specs=specs, seeds=seeds, train_ratio=args.train_ratio)

    out_dir = _resolve_out_dir(args)
    payload = render.comparison_report_payload(result)
    render.write_atomic(os.path.join(out_dir, "report.json"), render.to_json(payload))
    render.write_atomic(os.path.join(out_dir, "comparison.csv"), render.comparison_csv(result))
    render.write_atomic(os.path.join(out_dir, "comparison.md"), render.comparison_markdown(result))

    if args.format == "csv":
        print(render.comparison_csv(result), end="")
    elif args.format == "json":
        print(render.to_json(payload["aggregate"]), end="")
    else:
        print(render.comparison_markdown(result), end="")
    print(f"reports written to {out_dir}")
    return 0


def _cmd_validate_activities(args) -> int:
    path = args.file if args.file else bundled_models_path()
    _echo_config(args, {"file": str(path)})
    models = load_activity_models(path)
    if not models:
        print("no models found", file=sys.stderr)
        return 1
    all_ok = True
    for model in models:
        outcome = validate_activity_model(model)
        status = "pass" if outcome.ok else "FAIL"
        print(f"{status}  {model.name}  (threshold {model.threshold}, {model.size} elements)")
        for failure in outcome.failures:
            all_ok = False
            print(f"      - {failure}")
    return 0 if all_ok else 1


def _cmd_synth(args) -> int:
    _echo_config(args)
    if args.kind == "beacon":
        dataset = synthetic_walk_dataset(
            rows=args.rows, noise_sigma=args.noise_sigma, seed=args.seed
        )
    elif args.kind == "rssi":
        dataset = synthetic_rssi_dataset(rows=args.rows, seed=args.seed)
    else:
        dataset = synthetic_imu_dataset(rows=args.rows, seed=args.seed)
    write_csv(dataset, args.out)
    print(f"wrote {len(dataset)} {args.kind} rows to {args.out}")
    for note in dataset.ingest_notes:
        print(f"note: {note}")
    return 0


def _cmd_metrics(args) -> int:
    _echo_config(args)
    errors_x = _read_error_column(args.errors_x)
    errors_y = _read_error_column(args.errors_y)
    ex = rmse(errors_x)
    ey = rmse(errors_y)
    eh = horizontal_error(ex, ey)
    payload = {
        "pipeline": "metrics",
        "rmse_x_cm": ex,
        "rmse_y_cm": ey,
        "horizontal_error_cm": eh,
        "n_x": len(errors_x),
        "n_y": len(errors_y),
    }
    out_dir = _resolve_out_dir(args)
    render.write_atomic(os.path.join(out_dir, "report.json"), render.to_json(payload))
    print(f"rmse_x: {ex:.4f} cm  rmse_y: {ey:.4f} cm  horizontal_error: {eh:.4f} cm")
    if args.format == "json":
        print(render.to_json(payload), end="")
    return 0


def run_cli(argv=None) -> int:
    """Parse argv and run one subcommand, mapping failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "zone-rssi":
            return _cmd_zone(args, "rssi")
        if args.command == "zone-imu":
            return _cmd_zone(args, "imu")
        if args.command == "coords":
            return _cmd_coords(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "validate-activities":
            return _cmd_validate_activities(args)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "metrics":
            return _cmd_metrics(args)
        raise CliUsageError(f"unknown command {args.command!r}")
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SchemaError, ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 1
    except TrainingDivergedError as exc:
        print(f"training diverged: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
