"""Forecast accuracy metrics: RMSE, MAE and MAPE (percent)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ZeroActual, ZeroActualForMape
from .numeric import as_vector


@dataclass(frozen=True)
class MetricReport:
    rmse: float
    mae: float
    mape: float
    n: int


def evaluate(y, yhat) -> MetricReport:
    """RMSE and MAE in target units, MAPE in percent.

    MAPE requires every actual to be nonzero; GDP levels are strictly
    positive so hitting that error means the inputs are wrong.
    """
    y = as_vector(y)
    yhat = as_vector(yhat)
    if y.shape[0] != yhat.shape[0]:
        raise LengthMismatch(f"actuals ({y.shape[0]}) vs predictions ({yhat.shape[0]})")
    if y.shape[0] == 0:
        raise LengthMismatch("empty inputs")
    err = y - yhat
    rmse = float(np.sqrt(np.mean(err**2)))
    mae = float(np.mean(np.abs(err)))
    if np.any(y == 0):
        raise ZeroActualForMape("MAPE undefined: actual value of 0 present")
    mape = float(np.mean(np.abs(err / y)) * 100.0)
    return MetricReport(rmse=rmse, mae=mae, mape=mape, n=int(y.shape[0]))


def percentage_error_series(y, yhat) -> np.ndarray:
    """Signed per-observation percentage error: (yhat_t - y_t) / y_t * 100."""
    y = as_vector(y)
    yhat = as_vector(yhat)
    if y.shape[0] != yhat.shape[0]:
        raise LengthMismatch(f"actuals ({y.shape[0]}) vs predictions ({yhat.shape[0]})")
    if np.any(y == 0):
        raise ZeroActual("percentage error undefined: actual value of 0 present")
    return (yhat - y) / y * 100.0
