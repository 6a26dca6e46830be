"""Penalized linear families (OLS / ridge / lasso / elastic net) and PCR.

The linear families all minimize one Lagrangian objective

    (1/n) ||y - b0 - X b||^2 + lam * [(1 - alpha) ||b||_2^2 + alpha ||b||_1]

with an unpenalized intercept b0: OLS is lam=0, ridge alpha=0, lasso alpha=1.
Solved by cyclic coordinate descent with soft-thresholding; the intercept is
profiled out by centering, which is exact because it is unpenalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import KOutOfRange, NonPositiveValue, NotConverged
from ..numeric import pca, solve_least_squares
from .base import FittedModel, ModelSpec, check_xy

CD_TOL = 1e-8
CD_MAX_SWEEPS = 10_000


def soft_threshold(z: float, t: float) -> float:
    if z > t:
        return z - t
    if z < -t:
        return z + t
    return 0.0


def coordinate_descent(
    X,
    y,
    lam: float,
    alpha: float,
    tol: float = CD_TOL,
    max_sweeps: int = CD_MAX_SWEEPS,
) -> tuple[float, np.ndarray, int]:
    """Minimize the elastic-net objective; returns (intercept, coefs, sweeps).

    Converged when no coefficient moves more than ``tol`` in a full sweep;
    raises NotConverged past ``max_sweeps``. Zero-variance columns keep a
    zero coefficient.
    """
    X, y = check_xy(X, y)
    n, p = X.shape
    xm = X.mean(axis=0)
    ym = float(y.mean())
    xc = np.ascontiguousarray(X - xm)
    r = y - ym  # residual of the centered problem, maintained incrementally
    col_sq = (xc * xc).sum(axis=0) / n
    denom = 2.0 * (col_sq + lam * (1.0 - alpha))
    thresh = lam * alpha
    beta = np.zeros(p)
    sweeps = 0
    delta = np.inf
    for sweeps in range(1, max_sweeps + 1):
        delta = 0.0
        for j in range(p):
            if denom[j] == 0.0:
                continue
            bj = beta[j]
            if bj != 0.0:
                r += xc[:, j] * bj
            rho = 2.0 * float(xc[:, j] @ r) / n
            bn = soft_threshold(rho, thresh) / denom[j]
            if bn != 0.0:
                r -= xc[:, j] * bn
            beta[j] = bn
            step = abs(bn - bj)
            if step > delta:
                delta = step
        if delta < tol:
            break
    else:
        raise NotConverged(
            f"coordinate descent: max change {delta:.3e} after {max_sweeps} sweeps",
            sweeps=max_sweeps,
            last_delta=delta,
        )
    intercept = ym - float(xm @ beta)
    return intercept, beta, sweeps


@dataclass(frozen=True)
class LinearState:
    kind = "linear"
    intercept: float
    coef: np.ndarray

    @property
    def n_features(self) -> int:
        return self.coef.shape[0]

    def predict_raw(self, X) -> np.ndarray:
        return self.intercept + X @ self.coef


def fit_linear_family(spec: ModelSpec, X, y, **context) -> FittedModel:
    """Fit ols/ridge/lasso/enet via coordinate descent on the shared objective."""
    lam_alpha = {
        "ols": lambda p: (0.0, 0.0),
        "ridge": lambda p: (p["lambda"], 0.0),
        "lasso": lambda p: (p["lambda"], 1.0),
        "enet": lambda p: (p["lambda"], p["alpha"]),
    }
    lam, alpha = lam_alpha[spec.family](spec.params)
    intercept, coef, _ = coordinate_descent(X, y, lam, alpha)
    return FittedModel(spec=spec, state=LinearState(intercept, coef), **context)


@dataclass(frozen=True)
class PcrState:
    kind = "pcr"
    column_means: np.ndarray
    loadings: np.ndarray  # p x k, first k principal axes
    intercept: float
    theta: np.ndarray  # k component coefficients

    @property
    def n_features(self) -> int:
        return self.column_means.shape[0]

    def predict_raw(self, X) -> np.ndarray:
        scores = (X - self.column_means) @ self.loadings
        return self.intercept + scores @ self.theta


def fit_pcr(spec: ModelSpec, X, y, **context) -> FittedModel:
    """Least squares of y on the first k principal component scores."""
    X, y = check_xy(X, y)
    n, p = X.shape
    k = spec.params["k"]
    if not 1 <= k <= p:
        raise KOutOfRange(f"pcr k={k} outside 1..{p}")
    basis = pca(X)
    scores = basis.transform(X, k)
    design = np.column_stack([np.ones(n), scores])
    theta = solve_least_squares(design, y)
    state = PcrState(
        column_means=basis.column_means,
        loadings=basis.loadings[:, :k].copy(),
        intercept=float(theta[0]),
        theta=theta[1:],
    )
    return FittedModel(spec=spec, state=state, **context)


@dataclass(frozen=True)
class LogLinearState:
    """OLS fit in logs; predictions are exponentiated without smearing."""

    kind = "ols_log"
    intercept: float
    coef: np.ndarray

    @property
    def n_features(self) -> int:
        return self.coef.shape[0]

    def predict_raw(self, X) -> np.ndarray:
        if np.any(X <= 0):
            raise NonPositiveValue("log-linear model needs strictly positive features")
        return np.exp(self.intercept + np.log(X) @ self.coef)


def fit_ols_log(X, y, **context) -> FittedModel:
    """OLS on log-transformed features and target (the OLS-log benchmark)."""
    X, y = check_xy(X, y)
    if np.any(X <= 0):
        raise NonPositiveValue("log transform needs strictly positive features")
    if np.any(y <= 0):
        raise NonPositiveValue("log transform needs a strictly positive target")
    n = X.shape[0]
    design = np.column_stack([np.ones(n), np.log(X)])
    beta = solve_least_squares(design, np.log(y))
    state = LogLinearState(intercept=float(beta[0]), coef=beta[1:])
    return FittedModel(spec=ModelSpec("ols"), state=state, **context)
