"""Linear support vector regression solved in the primal.

Minimizes  0.5 ||w||^2 + c * sum_i max(0, |y_i - <w, x_i> - b| - mu)
(the unconstrained form of the mu-tube program) by deterministic normalized
subgradient descent with iterate averaging: a fixed schedule of 50k steps of
length 1 / (t * max(1, s)) where s is the RMS norm of the augmented rows.
The chosen iterate is whichever of (best-objective iterate, iterate average)
scores lower, so it is within tolerance of the best point visited. Descent
starts from the least-squares fit, which keeps early subgradients small on
the tiny, pre-scaled datasets this is built for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .base import FittedModel, ModelSpec, check_xy

SVR_ITERS = 50_000


@njit(cache=True)
def _descend(xa, y, c, mu, scale, iters, theta0):  # pragma: no cover - jitted
    n, q = xa.shape
    p = q - 1
    theta = theta0.copy()
    best = np.inf
    best_theta = theta.copy()
    avg = np.zeros(q)
    g = np.zeros(q)
    for t in range(1, iters + 1):
        obj = 0.0
        for j in range(p):
            obj += 0.5 * theta[j] * theta[j]
            g[j] = theta[j]
        g[p] = 0.0
        for i in range(n):
            r = y[i]
            for j in range(q):
                r -= xa[i, j] * theta[j]
            a = abs(r)
            if a > mu:
                obj += c * (a - mu)
                s = c if r > 0.0 else -c
                for j in range(q):
                    g[j] -= s * xa[i, j]
        if obj < best:
            best = obj
            for j in range(q):
                best_theta[j] = theta[j]
        gn = 0.0
        for j in range(q):
            gn += g[j] * g[j]
        gn = np.sqrt(gn)
        if gn == 0.0:
            # subgradient zero: remaining iterates would not move
            for j in range(q):
                avg[j] += theta[j] * (iters - t + 1)
            break
        step = 1.0 / (t * scale)
        for j in range(q):
            theta[j] -= step * g[j] / gn
            avg[j] += theta[j]
    for j in range(q):
        avg[j] /= iters
    return best_theta, best, avg


def svr_objective(w: np.ndarray, b: float, X, y, c: float, mu: float) -> float:
    resid = y - X @ w - b
    hinge = np.maximum(np.abs(resid) - mu, 0.0)
    return 0.5 * float(w @ w) + c * float(hinge.sum())


@dataclass(frozen=True)
class SvrState:
    kind = "svr"
    w: np.ndarray
    b: float

    @property
    def n_features(self) -> int:
        return self.w.shape[0]

    def predict_raw(self, X) -> np.ndarray:
        return X @ self.w + self.b


def fit_svr(spec: ModelSpec, X, y, **context) -> FittedModel:
    X, y = check_xy(X, y)
    c = spec.params["c"]
    mu = spec.params["mu"]
    n, p = X.shape
    xa = np.ascontiguousarray(np.column_stack([X, np.ones(n)]))
    theta0 = np.linalg.lstsq(xa, y, rcond=None)[0]
    scale = max(1.0, float(np.sqrt((xa * xa).sum(axis=1).mean())))
    best_theta, _, avg = _descend(xa, y, c, mu, scale, SVR_ITERS, theta0)
    candidates = [best_theta, avg]
    objs = [svr_objective(t[:p], float(t[p]), X, y, c, mu) for t in candidates]
    theta = candidates[int(np.argmin(objs))]
    state = SvrState(w=theta[:p].copy(), b=float(theta[p]))
    return FittedModel(spec=spec, state=state, **context)
