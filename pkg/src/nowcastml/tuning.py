"""Forward-chaining cross-validation folds and grid-search tuning.

Folds use an expanding window: every fold trains on all rows before its
validation block, validation blocks are consecutive ``horizon``-quarter
slices, and the last block ends exactly at the end of the training set.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import GridSearchError, TooShortForFolds
from .frame import QuarterlyFrame, apply_scaler, fit_robust_scaler
from .metrics import evaluate
from .models import ModelSpec, fit_model, predict
from .numeric import RngStream

MIN_INITIAL_WINDOW = 8

# families whose fits consume a seed
_SEEDED = ("rf", "gbt")


@dataclass(frozen=True)
class Fold:
    """Train on rows [0, train_end), validate on [val_start, val_end)."""

    train_end: int
    val_start: int
    val_end: int


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple[Fold, ...]
    horizon: int
    n_train: int


def make_forward_chain_folds(
    n_train: int,
    k_folds: int = 5,
    horizon: int = 4,
    min_initial_window: int = MIN_INITIAL_WINDOW,
) -> FoldPlan:
    """Expanding-window folds whose first training window is n_train - k*h."""
    if k_folds < 1 or horizon < 1:
        raise TooShortForFolds(f"need k_folds >= 1 and horizon >= 1, got {k_folds}, {horizon}")
    initial = n_train - k_folds * horizon
    if initial < min_initial_window:
        raise TooShortForFolds(
            f"n_train={n_train} leaves an initial window of {initial} "
            f"(< {min_initial_window}) for {k_folds} folds of {horizon}"
        )
    folds = []
    for k in range(k_folds):
        end = initial + k * horizon
        folds.append(Fold(train_end=end, val_start=end, val_end=end + horizon))
    return FoldPlan(folds=tuple(folds), horizon=horizon, n_train=n_train)


@dataclass(frozen=True)
class GridPointResult:
    params: dict
    fold_rmse: tuple[float, ...]
    fold_mae: tuple[float, ...]
    fold_mape: tuple[float, ...]
    fold_mse: tuple[float, ...]

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(self.fold_rmse))

    @property
    def mean_mse(self) -> float:
        return float(np.mean(self.fold_mse))


@dataclass(frozen=True)
class CvReport:
    family: str
    points: tuple[GridPointResult, ...]
    chosen_index: int

    @property
    def chosen(self) -> GridPointResult:
        return self.points[self.chosen_index]

    def write_csv(self, path) -> None:
        """One row per (grid point, fold) plus a summary row per point."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["family", "grid_index", "params", "fold", "rmse", "mae", "mape", "chosen"]
            )
            for gi, point in enumerate(self.points):
                text = params_text(point.params)
                for fi in range(len(point.fold_rmse)):
                    writer.writerow(
                        [
                            self.family,
                            gi,
                            text,
                            fi,
                            repr(point.fold_rmse[fi]),
                            repr(point.fold_mae[fi]),
                            repr(point.fold_mape[fi]),
                            "",
                        ]
                    )
                writer.writerow(
                    [
                        self.family,
                        gi,
                        text,
                        "mean",
                        repr(point.mean_rmse),
                        repr(float(np.mean(point.fold_mae))),
                        repr(float(np.mean(point.fold_mape))),
                        "yes" if gi == self.chosen_index else "",
                    ]
                )


def params_text(params: Mapping[str, object]) -> str:
    return " ".join(f"{k}={params[k]}" for k in sorted(params))


def complexity_key(family: str, params: Mapping[str, object]) -> tuple:
    """Sort key breaking mean-RMSE ties toward the simpler model.

    Larger penalties, fewer components/neighbours, fewer and shallower trees,
    smaller C / learning rate and wider tubes all count as simpler.
    """
    def depth(v):
        return float("inf") if v is None else v

    if family in ("ridge", "lasso", "enet"):
        return (-params["lambda"], params.get("alpha", 0.0))
    if family in ("pcr", "knn"):
        return (params["k"],)
    if family == "svr":
        return (params["c"], -params["mu"])
    if family == "rf":
        return (params["trees"], depth(params["max_depth"]), -params["min_leaf"])
    if family == "gbt":
        return (
            params["trees"],
            depth(params["max_depth"]),
            params["learning_rate"],
            -params["lambda_reg"],
        )
    return ()


def grid_search(
    family: str,
    grid: Sequence[Mapping[str, object]],
    train_frame: QuarterlyFrame,
    plan: FoldPlan,
    feature_names: Sequence[str],
    seed_stream: RngStream,
) -> CvReport:
    """Score every grid point across the folds; pick the lowest mean RMSE.

    Per fold, the scaler and the model see only rows before the validation
    block; predictions are scored in target levels. Fit errors propagate
    annotated with the failing grid point and fold.
    """
    if not grid:
        raise GridSearchError(f"{family}: empty grid")
    if plan.n_train != len(train_frame):
        raise GridSearchError(
            f"{family}: plan covers {plan.n_train} rows, frame has {len(train_frame)}"
        )
    feature_names = list(feature_names)
    target = train_frame.target_name
    scaled_cols = feature_names + [target]
    results = []
    for gi, params in enumerate(grid):
        seed = None
        if family in _SEEDED:
            seed = seed_stream.child_seed(f"grid/{gi}")
        rmses, maes, mapes, mses = [], [], [], []
        for fi, fold in enumerate(plan.folds):
            try:
                spec = ModelSpec(family, dict(params), seed=seed)
                fold_train = train_frame.slice_rows(0, fold.train_end)
                fold_val = train_frame.slice_rows(fold.val_start, fold.val_end)
                scaler = fit_robust_scaler(fold_train, scaled_cols)
                strain = apply_scaler(scaler, fold_train)
                sval = apply_scaler(scaler, fold_val)
                tscale = scaler.scales[target]
                model = fit_model(
                    spec,
                    strain.feature_matrix(feature_names),
                    strain.target,
                    feature_names=tuple(feature_names),
                    target_name=target,
                    target_scale=(tscale.median, tscale.divisor),
                )
                preds = predict(model, sval.feature_matrix(feature_names))
                report = evaluate(fold_val.target, preds)
            except Exception as e:
                raise GridSearchError(
                    f"{family}: grid point {gi} ({params_text(params)}), fold {fi}: {e}"
                ) from e
            rmses.append(report.rmse)
            maes.append(report.mae)
            mapes.append(report.mape)
            mses.append(report.rmse**2)
        results.append(
            GridPointResult(
                params=dict(params),
                fold_rmse=tuple(rmses),
                fold_mae=tuple(maes),
                fold_mape=tuple(mapes),
                fold_mse=tuple(mses),
            )
        )
    order = sorted(
        range(len(results)),
        key=lambda i: (results[i].mean_rmse, complexity_key(family, results[i].params), i),
    )
    return CvReport(family=family, points=tuple(results), chosen_index=order[0])
