"""Quarterly GDP nowcasting toolkit.

Ingests quarterly indicator series, trains regularized linear, tree-ensemble,
nearest-neighbour and support-vector regressors plus econometric benchmarks
under forward-chaining time-series cross-validation, combines them with
inverse-MSE weights, and reports per-scenario accuracy metrics and
per-quarter prediction series.
"""

__version__ = "0.1.0"

from .ensemble import EnsembleWeights, compute_weights, ensemble_predict
from .errors import NowcastError
from .frame import (
    QuarterLabel,
    QuarterlyFrame,
    ScalerParams,
    ScenarioSpec,
    apply_scaler,
    deflate,
    fit_robust_scaler,
    invert_scaler,
    load_csv,
    quarter_range,
    split_scenario,
    write_csv,
    yoy_log_growth,
)
from .metrics import MetricReport, evaluate, percentage_error_series
from .models import FittedModel, ModelSpec, fit_ar4, fit_model, load_model, predict, save_model
from .numeric import PcaResult, RngStream, pca, quantile, solve_least_squares
from .pipeline import ScenarioReport, emit_reports, run_scenario
from .synth import DgpSpec, generate_synthetic
from .tuning import CvReport, FoldPlan, grid_search, make_forward_chain_folds

__all__ = [
    "CvReport",
    "DgpSpec",
    "EnsembleWeights",
    "FittedModel",
    "FoldPlan",
    "MetricReport",
    "ModelSpec",
    "NowcastError",
    "PcaResult",
    "QuarterLabel",
    "QuarterlyFrame",
    "RngStream",
    "ScalerParams",
    "ScenarioReport",
    "ScenarioSpec",
    "apply_scaler",
    "compute_weights",
    "deflate",
    "emit_reports",
    "ensemble_predict",
    "evaluate",
    "fit_ar4",
    "fit_model",
    "fit_robust_scaler",
    "generate_synthetic",
    "grid_search",
    "invert_scaler",
    "load_csv",
    "load_model",
    "make_forward_chain_folds",
    "pca",
    "percentage_error_series",
    "predict",
    "quantile",
    "quarter_range",
    "run_scenario",
    "save_model",
    "solve_least_squares",
    "split_scenario",
    "write_csv",
    "yoy_log_growth",
]
