"""Scenario pipeline: deflate, split, scale, tune, refit, combine, report.

Everything downstream of the raw frame is deterministic in the configured
seed. The ensemble combines the machine-learning families only; AR(4),
OLS-log and OLS-RS are benchmarks reported next to it.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .config import ML_FAMILIES, RunConfig, resolve_grid
from .ensemble import EnsembleWeights, compute_weights, ensemble_predict
from .errors import NowcastError, PipelineError
from .frame import (
    QuarterlyFrame,
    ScalerParams,
    apply_scaler,
    deflate,
    fit_robust_scaler,
    split_scenario,
)
from .metrics import MetricReport, evaluate, percentage_error_series
from .models import ModelSpec, fit_ar4, fit_model, fit_ols_log, predict
from .numeric import RngStream
from .tuning import CvReport, grid_search, make_forward_chain_folds

DISPLAY_NAMES = {
    "ridge": "Ridge",
    "lasso": "Lasso",
    "enet": "E-Net",
    "pcr": "PCR",
    "rf": "RFR",
    "knn": "k-NN",
    "svr": "SVR",
    "gbt": "XGBoost",
}
BENCHMARK_NAMES = ("AR(4)", "OLS-log", "OLS-RS")
ENSEMBLE_NAME = "Ensemble Model"


@dataclass(frozen=True)
class ModelResult:
    name: str
    family: str
    chosen_params: dict
    train_metrics: MetricReport | None
    test_metrics: MetricReport
    predictions: np.ndarray
    model: object
    cv: CvReport | None = None
    validation_mse: float | None = None


@dataclass(frozen=True)
class ScenarioReport:
    scenario_name: str
    test_quarters: tuple
    actual: np.ndarray
    ml_results: tuple[ModelResult, ...]
    benchmarks: tuple[ModelResult, ...]
    weights: EnsembleWeights | None
    ensemble_predictions: np.ndarray | None
    ensemble_metrics: MetricReport | None
    scaler: ScalerParams
    leakage_warning: bool

    def all_named_predictions(self) -> list[tuple[str, np.ndarray]]:
        """(name, test predictions) in the fixed emission order."""
        out = [(r.name, r.predictions) for r in self.ml_results]
        if self.ensemble_predictions is not None:
            out.append((ENSEMBLE_NAME, self.ensemble_predictions))
        out.extend((r.name, r.predictions) for r in self.benchmarks)
        return out


def _ordered_families(families) -> list[str]:
    # fixed canonical order no matter how the config lists them
    return [f for f in ML_FAMILIES if f in families]


def run_scenario(config: RunConfig, frame: QuarterlyFrame, scenario_name: str) -> ScenarioReport:
    """Run the full pipeline for one named scenario."""
    scenario = config.scenario(scenario_name)
    target = config.target

    stage = "deflate"
    try:
        if frame.target_name != target:
            raise PipelineError(stage, f"frame target {frame.target_name!r} != config {target!r}")
        if config.cpi:
            base = config.cpi_base or frame.index[0]
            data = deflate(frame, config.cpi, base, config.nominal)
        else:
            data = frame
        if config.features is not None:
            features = list(config.features)
        else:
            features = [c for c in data.column_names if c not in (target, config.cpi)]
        if not features:
            raise PipelineError(stage, "no feature columns left after exclusions")

        stage = "split"
        train, test = split_scenario(data, scenario)
        plan = make_forward_chain_folds(
            len(train), config.folds, config.horizon, config.min_initial_window
        )

        stage = "scale"
        scaler = fit_robust_scaler(train, features + [target])
        strain = apply_scaler(scaler, train)
        stest = apply_scaler(scaler, test)
        tscale = scaler.scales[target]
        link = (tscale.median, tscale.divisor)
        x_train = strain.feature_matrix(features)
        x_test = stest.feature_matrix(features)

        base_stream = RngStream(config.seed)
        ml_results = []
        for family in _ordered_families(config.families):
            stage = f"tune:{family}"
            fam_stream = base_stream.substream(f"family/{family}")
            grid = resolve_grid(config, family, len(features))
            cv = grid_search(family, grid, train, plan, features, fam_stream)

            stage = f"refit:{family}"
            seed = fam_stream.child_seed("refit") if family in ("rf", "gbt") else None
            spec = ModelSpec(family, dict(cv.chosen.params), seed=seed)
            model = fit_model(
                spec,
                x_train,
                strain.target,
                feature_names=tuple(features),
                target_name=target,
                target_scale=link,
            )
            train_preds = predict(model, x_train)
            test_preds = predict(model, x_test)
            ml_results.append(
                ModelResult(
                    name=DISPLAY_NAMES[family],
                    family=family,
                    chosen_params=dict(cv.chosen.params),
                    train_metrics=evaluate(train.target, train_preds),
                    test_metrics=evaluate(test.target, test_preds),
                    predictions=test_preds,
                    model=model,
                    cv=cv,
                    validation_mse=cv.chosen.mean_mse,
                )
            )

        stage = "weights"
        weights = None
        ens_pred = None
        ens_metrics = None
        if len(ml_results) >= 2:
            if config.weight_basis == "validation_mse":
                mse = {r.name: r.validation_mse for r in ml_results}
            else:
                mse = {
                    r.name: float(np.mean((test.target - r.predictions) ** 2))
                    for r in ml_results
                }
            weights = compute_weights(mse, config.weight_basis)

            stage = "ensemble"
            stacked = np.stack([r.predictions for r in ml_results])
            ens_pred = ensemble_predict(stacked, weights)
            ens_metrics = evaluate(test.target, ens_pred)
            worst = max(r.test_metrics.rmse for r in ml_results)
            if ens_metrics.rmse > worst * (1.0 + 1e-12) + 1e-12:
                raise PipelineError(
                    stage,
                    f"convexity bound violated: ensemble RMSE {ens_metrics.rmse} "
                    f"> max member RMSE {worst}",
                )

        stage = "benchmark:ar4"
        ar4 = fit_ar4(train.target, target_name=target)
        ar4_preds = predict(ar4, horizon=len(test))
        benchmarks = [
            ModelResult(
                name="AR(4)",
                family="ar4",
                chosen_params={},
                train_metrics=None,
                test_metrics=evaluate(test.target, ar4_preds),
                predictions=ar4_preds,
                model=ar4,
            )
        ]

        stage = "benchmark:ols_log"
        ols_log = fit_ols_log(
            train.feature_matrix(features),
            train.target,
            feature_names=tuple(features),
            target_name=target,
        )
        log_preds = predict(ols_log, test.feature_matrix(features))
        benchmarks.append(
            ModelResult(
                name="OLS-log",
                family="ols",
                chosen_params={},
                train_metrics=None,
                test_metrics=evaluate(test.target, log_preds),
                predictions=log_preds,
                model=ols_log,
            )
        )

        stage = "benchmark:ols_rs"
        ols_rs = fit_model(
            ModelSpec("ols"),
            x_train,
            strain.target,
            feature_names=tuple(features),
            target_name=target,
            target_scale=link,
        )
        rs_preds = predict(ols_rs, x_test)
        benchmarks.append(
            ModelResult(
                name="OLS-RS",
                family="ols",
                chosen_params={},
                train_metrics=None,
                test_metrics=evaluate(test.target, rs_preds),
                predictions=rs_preds,
                model=ols_rs,
            )
        )
    except PipelineError:
        raise
    except NowcastError as e:
        raise PipelineError(stage, str(e)) from e

    return ScenarioReport(
        scenario_name=scenario.name,
        test_quarters=tuple(test.index),
        actual=test.target,
        ml_results=tuple(ml_results),
        benchmarks=tuple(benchmarks),
        weights=weights,
        ensemble_predictions=ens_pred,
        ensemble_metrics=ens_metrics,
        scaler=scaler,
        leakage_warning=(config.weight_basis == "test_mse"),
    )


def _fmt3(value: float) -> str:
    return f"{value:.3f}"


def emit_reports(report: ScenarioReport, outdir, emit_cv: bool = False) -> list[str]:
    """Write the four per-scenario CSV files; returns the paths written.

    Metric values match the tables' 3-decimal rendering; prediction and
    error series keep full float precision like the figure data.
    """
    os.makedirs(outdir, exist_ok=True)
    name = report.scenario_name
    written = []

    path = os.path.join(outdir, f"metrics_{name}.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "phase", "rmse", "mae", "mape"])
        for r in report.ml_results:
            m = r.train_metrics
            writer.writerow([r.name, "train", _fmt3(m.rmse), _fmt3(m.mae), _fmt3(m.mape)])
        for r in report.ml_results:
            m = r.test_metrics
            writer.writerow([r.name, "test", _fmt3(m.rmse), _fmt3(m.mae), _fmt3(m.mape)])
        if report.ensemble_metrics is not None:
            m = report.ensemble_metrics
            writer.writerow([ENSEMBLE_NAME, "test", _fmt3(m.rmse), _fmt3(m.mae), _fmt3(m.mape)])
        for r in report.benchmarks:
            m = r.test_metrics
            writer.writerow([r.name, "test", _fmt3(m.rmse), _fmt3(m.mae), _fmt3(m.mape)])
    written.append(path)

    named = report.all_named_predictions()
    path = os.path.join(outdir, f"predictions_{name}.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", "actual", *(n for n, _ in named)])
        for i, q in enumerate(report.test_quarters):
            row = [str(q), repr(float(report.actual[i]))]
            row.extend(repr(float(p[i])) for _, p in named)
            writer.writerow(row)
    written.append(path)

    path = os.path.join(outdir, f"pct_errors_{name}.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", *(n for n, _ in named)])
        series = [percentage_error_series(report.actual, p) for _, p in named]
        for i, q in enumerate(report.test_quarters):
            writer.writerow([str(q), *(repr(float(s[i])) for s in series)])
    written.append(path)

    path = os.path.join(outdir, f"weights_{name}.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if report.leakage_warning:
            fh.write("# warning: weights computed on the test set (paper-fidelity mode)\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["member", "weight", "basis", "mse"])
        if report.weights is not None:
            if report.weights.basis == "validation_mse":
                mse = {r.name: r.validation_mse for r in report.ml_results}
            else:
                mse = {
                    r.name: float(np.mean((report.actual - r.predictions) ** 2))
                    for r in report.ml_results
                }
            for member, weight in zip(report.weights.members, report.weights.weights):
                writer.writerow(
                    [member, repr(float(weight)), report.weights.basis, repr(mse[member])]
                )
    written.append(path)

    if emit_cv:
        for r in report.ml_results:
            if r.cv is not None:
                path = os.path.join(outdir, f"cv_{name}_{r.family}.csv")
                r.cv.write_csv(path)
                written.append(path)
    return written
