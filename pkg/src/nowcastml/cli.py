"""Command-line interface.

Subcommands: synth (generate the synthetic dataset), run (one scenario),
scenarios (every configured scenario), evaluate (metrics from a predictions
CSV), inspect-folds (print a fold plan). Exit code 0 on success, 2 on any
package error (printed with its pipeline stage when available).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import __version__
from .config import load_config
from .errors import NowcastError
from .frame import load_csv, write_csv
from .metrics import evaluate
from .pipeline import emit_reports, run_scenario
from .synth import DgpSpec, generate_synthetic
from .tuning import make_forward_chain_folds


def _add_run_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to the INI run configuration")
    parser.add_argument("--seed", type=int, default=None, help="override the configured seed")
    parser.add_argument("--out", default=None, help="override the configured output directory")
    parser.add_argument(
        "--weights-on-test",
        action="store_true",
        help="paper-fidelity mode: ensemble weights from test-set MSE (leaks test data)",
    )
    parser.add_argument(
        "--emit-cv", action="store_true", help="also write per-family cross-validation CSVs"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nowcastml", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nowcastml {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic quarterly dataset")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--quarters", type=int, default=64)
    p.add_argument("--out", default="synthetic.csv", help="CSV output path")
    p.add_argument("--truth", default=None, help="ground-truth JSON path (default: <out>.truth.json)")
    p.add_argument("--noise-sd", type=float, default=None, help="override the GDP noise s.d.")

    p = sub.add_parser("run", help="run one configured scenario")
    _add_run_overrides(p)
    p.add_argument("--scenario", required=True, help="scenario name from the config")

    p = sub.add_parser("scenarios", help="run every configured scenario")
    _add_run_overrides(p)

    p = sub.add_parser("evaluate", help="recompute metrics from a predictions CSV")
    p.add_argument("--predictions", required=True, help="a predictions_<scenario>.csv file")

    p = sub.add_parser("inspect-folds", help="print a forward-chaining fold plan")
    p.add_argument("--n-train", type=int, required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--min-initial-window", type=int, default=8)

    return parser


def _load_with_overrides(args) -> "RunConfig":
    config = load_config(args.config)
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.weights_on_test:
        updates["weight_basis"] = "test_mse"
    return dataclasses.replace(config, **updates) if updates else config


def _cmd_synth(args) -> int:
    dgp = DgpSpec() if args.noise_sd is None else DgpSpec(noise_sd=args.noise_sd)
    frame, truth = generate_synthetic(args.seed, args.quarters, dgp)
    write_csv(frame, args.out)
    truth_path = args.truth or f"{args.out}.truth.json"
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump(truth, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} ({len(frame)} quarters) and {truth_path}")
    return 0


def _run_and_emit(config, frame, scenario_name: str, emit_cv: bool) -> None:
    report = run_scenario(config, frame, scenario_name)
    if report.leakage_warning:
        print(
            f"warning: {scenario_name}: ensemble weights use test-set MSE",
            file=sys.stderr,
        )
    for path in emit_reports(report, config.out_dir, emit_cv=emit_cv):
        print(f"wrote {path}")


def _cmd_run(args) -> int:
    config = _load_with_overrides(args)
    frame = load_csv(config.data_path, config.target)
    _run_and_emit(config, frame, args.scenario, args.emit_cv)
    return 0


def _cmd_scenarios(args) -> int:
    config = _load_with_overrides(args)
    frame = load_csv(config.data_path, config.target)
    for scenario in config.scenarios:
        _run_and_emit(config, frame, scenario.name, args.emit_cv)
    return 0


def _cmd_evaluate(args) -> int:
    import csv as _csv

    with open(args.predictions, newline="", encoding="utf-8") as fh:
        rows = list(_csv.reader(fh))
    if not rows or rows[0][:2] != ["quarter", "actual"]:
        raise NowcastError(f"{args.predictions}: not a predictions CSV")
    header = rows[0]
    data = [[float(c) for c in row[1:]] for row in rows[1:]]
    actual = [row[0] for row in data]
    print("model,rmse,mae,mape")
    for j, model_name in enumerate(header[2:], start=1):
        preds = [row[j] for row in data]
        m = evaluate(actual, preds)
        print(f"{model_name},{m.rmse:.3f},{m.mae:.3f},{m.mape:.3f}")
    return 0


def _cmd_inspect_folds(args) -> int:
    plan = make_forward_chain_folds(
        args.n_train, args.folds, args.horizon, args.min_initial_window
    )
    print(f"n_train={plan.n_train} folds={len(plan.folds)} horizon={plan.horizon}")
    for i, fold in enumerate(plan.folds, start=1):
        print(
            f"fold {i}: train [0, {fold.train_end})  "
            f"validate [{fold.val_start}, {fold.val_end})"
        )
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "run": _cmd_run,
    "scenarios": _cmd_scenarios,
    "evaluate": _cmd_evaluate,
    "inspect-folds": _cmd_inspect_folds,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NowcastError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
