"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to watch them stream)."""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from nowcastml.config import RunConfig
from nowcastml.ensemble import compute_weights
from nowcastml.frame import quarter_range
from nowcastml.metrics import evaluate
from nowcastml.models import (
    ModelSpec,
    fit_ar4,
    fit_model,
    model_to_dict,
    predict,
    soft_threshold,
)
from nowcastml.numeric import solve_least_squares
from nowcastml.pipeline import BENCHMARK_NAMES, ENSEMBLE_NAME, emit_reports, run_scenario
from nowcastml.synth import generate_synthetic
from nowcastml.tuning import make_forward_chain_folds

from tests.conftest import FAST_GRIDS
from tests.test_models_ar4 import levels_from_growth, simulate_ar4_growth


@contextmanager
def criterion(number, label):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {number} {label}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {label}: PASS")


def scenario_config(outdir, seed=42):
    return RunConfig(
        data_path="",
        target="GDP",
        cpi="CPI",
        seed=seed,
        out_dir=str(outdir),
        grids=dict(FAST_GRIDS),
    )


@pytest.fixture(scope="module")
def synthetic_runs(tmp_path_factory):
    """One full run of the three canonical scenarios on the synthetic frame."""
    frame, truth = generate_synthetic(42, 64)
    outdir = tmp_path_factory.mktemp("acceptance")
    config = scenario_config(outdir)
    reports = {
        name: run_scenario(config, frame, name)
        for name in ("scenario1", "scenario2", "scenario3")
    }
    paths = emit_reports(reports["scenario1"], config.out_dir)
    return frame, config, reports, paths


class TestAcceptance:
    def test_1_solver_oracles(self):
        with criterion(1, "solver oracles (ridge/lasso/pcr vs closed forms)"):
            for seed in range(20):
                rng = np.random.default_rng(seed)
                X = rng.normal(size=(40, 6))
                y = 1.5 + X @ rng.normal(size=6) + 0.2 * rng.normal(size=40)
                n = len(y)

                ols = solve_least_squares(np.column_stack([np.ones(n), X]), y)
                ridge = fit_model(ModelSpec("ridge", {"lambda": 0.0}), X, y)
                assert abs(ridge.state.intercept - ols[0]) <= 1e-8
                assert np.max(np.abs(ridge.state.coef - ols[1:])) <= 1e-8

                q, _ = np.linalg.qr(X - X.mean(axis=0))
                lam = 0.025
                lasso = fit_model(ModelSpec("lasso", {"lambda": lam}), q, y)
                expected = np.array(
                    [soft_threshold(b, n * lam / 2.0) for b in q.T @ y]
                )
                assert np.max(np.abs(lasso.state.coef - expected)) <= 1e-8

                pcr = fit_model(ModelSpec("pcr", {"k": 6}), X, y)
                ols_preds = ols[0] + X @ ols[1:]
                assert np.max(np.abs(predict(pcr, X) - ols_preds)) <= 1e-8

    def test_2_closed_form_shutoffs(self):
        with criterion(2, "closed-form shutoffs (lasso/k-NN/GBT)"):
            for seed in range(5):
                rng = np.random.default_rng(100 + seed)
                X = rng.normal(size=(40, 6))
                y = 2.0 + X @ rng.normal(size=6) + 0.3 * rng.normal(size=40)
                n = len(y)

                lam_max = float(np.max(np.abs(2.0 * X.T @ (y - y.mean()) / n)))
                for lam in (lam_max * (1.0 + 1e-10), 2.0 * lam_max):
                    lasso = fit_model(ModelSpec("lasso", {"lambda": lam}), X, y)
                    assert np.array_equal(lasso.state.coef, np.zeros(6))

                knn = fit_model(ModelSpec("knn", {"k": n}), X, y)
                assert np.allclose(predict(knn, X), y.mean(), atol=1e-12)

                gbt = fit_model(
                    ModelSpec(
                        "gbt",
                        {
                            "trees": 25,
                            "max_depth": None,
                            "learning_rate": 1.0,
                            "lambda_reg": 0.0,
                            "min_leaf": 1,
                        },
                    ),
                    X,
                    y,
                )
                assert np.max(np.abs(predict(gbt, X) - y)) < 1e-6

    def test_3_svr_line_recovery(self):
        with criterion(3, "SVR recovery of y = 2x + 1"):
            x = np.linspace(-4.0, 4.0, 33)
            model = fit_model(
                ModelSpec("svr", {"c": 1000.0, "mu": 0.1}), x[:, None], 2.0 * x + 1.0
            )
            assert abs(model.state.w[0] - 2.0) <= 0.05
            assert abs(model.state.b - 1.0) <= 0.05

    def test_4_ar4_recovery(self):
        with criterion(4, "AR(4) coefficient recovery"):
            phi = np.array([0.002, 0.3, 0.15, 0.1, 0.05])
            growths = simulate_ar4_growth(
                phi, 196, sigma=1e-4, seed=1, initial=[0.08, -0.05, 0.06, -0.03]
            )
            levels = levels_from_growth([100.0, 101.0, 99.5, 100.5], growths)
            assert len(levels) == 200
            model = fit_ar4(levels)
            assert np.max(np.abs(model.state.phi - phi)) < 0.05

    def test_5_fold_geometry(self):
        with criterion(5, "forward-chaining fold geometry"):
            plan = make_forward_chain_folds(48, 5, 4)
            assert [f.train_end for f in plan.folds] == [28, 32, 36, 40, 44]
            assert all(f.val_end - f.val_start == 4 for f in plan.folds)
            for n_train in range(28, 121):
                plan = make_forward_chain_folds(n_train, 5, 4)
                for fold in plan.folds:
                    assert max(range(fold.train_end)) < fold.val_start
                assert plan.folds[-1].val_end == n_train

    def test_6_metric_formulas(self):
        with criterion(6, "metric hand values and MAE <= RMSE"):
            m = evaluate([1.0, 1.0], [4.0, 5.0])
            assert math.isclose(m.rmse, math.sqrt(12.5), abs_tol=1e-9)
            assert math.isclose(m.mae, 3.5, abs_tol=1e-9)
            m = evaluate([100.0, 200.0], [110.0, 180.0])
            assert math.isclose(m.mape, 10.0, abs_tol=1e-9)
            rng = np.random.default_rng(0)
            for _ in range(10_000):
                k = int(rng.integers(1, 12))
                y = rng.uniform(1.0, 100.0, k)
                yhat = y + rng.normal(size=k) * 10.0
                m = evaluate(y, yhat)
                assert m.mae <= m.rmse + 1e-9 * max(1.0, m.rmse)

    def test_7_ensemble_weights_and_convexity(self, synthetic_runs):
        with criterion(7, "inverse-MSE weights and convexity bound"):
            w = compute_weights({"A": 1.0, "B": 3.0}, "validation_mse")
            assert w.weights[0] == 0.75 and w.weights[1] == 0.25
            _, _, reports, _ = synthetic_runs
            for report in reports.values():
                worst = max(r.test_metrics.rmse for r in report.ml_results)
                assert report.ensemble_metrics.rmse <= worst + 1e-9

    def test_8_end_to_end_determinism_and_no_leakage(self, synthetic_runs, tmp_path):
        with criterion(8, "end-to-end determinism, no leakage, re-derivation"):
            frame, config, reports, paths_a = synthetic_runs

            # byte-identical second run with the same seed
            out_b = tmp_path / "again"
            report_b = run_scenario(scenario_config(out_b), frame, "scenario1")
            paths_b = emit_reports(report_b, out_b)
            for pa, pb in zip(paths_a, paths_b):
                assert open(pa, "rb").read() == open(pb, "rb").read()

            # perturbing test-window rows changes no trained parameter
            start = frame.position(config.scenario("scenario1").test_start)
            mutated_cols = {}
            for col in ("GDP", "ELEC", "VAT", "CPI"):
                values = frame.column(col).copy()
                values[start:] *= 1.21
                mutated_cols[col] = values
            mutated = frame.with_columns(mutated_cols)
            report_m = run_scenario(config, mutated, "scenario1")
            base = reports["scenario1"]
            assert report_m.scaler == base.scaler
            for ra, rb in zip(base.ml_results, report_m.ml_results):
                assert ra.chosen_params == rb.chosen_params
                assert model_to_dict(ra.model) == model_to_dict(rb.model)
            assert np.array_equal(base.weights.weights, report_m.weights.weights)

            # emitted metrics re-derive from emitted predictions within 5e-4
            import csv

            with open(paths_a[1], newline="") as fh:
                rows = list(csv.reader(fh))
            header = rows[0]
            data = np.array([[float(c) for c in row[1:]] for row in rows[1:]])
            actual = data[:, 0]
            with open(paths_a[0], newline="") as fh:
                metric_rows = list(csv.reader(fh))[1:]
            assert metric_rows
            for name, phase, rmse, mae, mape in metric_rows:
                if phase != "test":
                    continue
                j = header.index(name) - 1
                m = evaluate(actual, data[:, j])
                assert math.isclose(float(rmse), m.rmse, abs_tol=5e-4)
                assert math.isclose(float(mae), m.mae, abs_tol=5e-4)
                assert math.isclose(float(mape), m.mape, abs_tol=5e-4)

    def test_9_paper_shape_fidelity(self, synthetic_runs):
        with criterion(9, "report row structure and test-quarter coverage"):
            frame, config, reports, paths = synthetic_runs
            import csv

            with open(paths[0], newline="") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["model", "phase", "rmse", "mae", "mape"]
            body = rows[1:]
            ml_names = ["Ridge", "Lasso", "E-Net", "PCR", "RFR", "k-NN", "SVR", "XGBoost"]
            # train panel for the 8 ML models
            assert [(r[0], r[1]) for r in body[:8]] == [(n, "train") for n in ml_names]
            # test panel for the 8 ML models
            assert [(r[0], r[1]) for r in body[8:16]] == [(n, "test") for n in ml_names]
            # ensemble vs benchmark rows
            assert [r[0] for r in body[16:]] == [ENSEMBLE_NAME, *BENCHMARK_NAMES]
            assert all(r[1] == "test" for r in body[16:])

            with open(paths[1], newline="") as fh:
                pred_rows = list(csv.reader(fh))
            scenario = config.scenario("scenario1")
            expected = quarter_range(scenario.test_start, 16)
            assert [r[0] for r in pred_rows[1:]] == [str(q) for q in expected]
            assert pred_rows[0][2:] == [
                *ml_names,
                ENSEMBLE_NAME,
                *BENCHMARK_NAMES,
            ]
