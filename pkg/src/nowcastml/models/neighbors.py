"""k-nearest-neighbour regression with a deterministic tie rule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import KOutOfRange
from .base import FittedModel, ModelSpec, check_xy


@dataclass(frozen=True)
class KnnState:
    kind = "knn"
    k: int
    train_x: np.ndarray
    train_y: np.ndarray

    @property
    def n_features(self) -> int:
        return self.train_x.shape[1]

    def predict_raw(self, X) -> np.ndarray:
        out = np.empty(X.shape[0])
        for i, row in enumerate(X):
            d = ((self.train_x - row) ** 2).sum(axis=1)
            # stable sort: equal distances resolve to the earliest training index
            nearest = np.argsort(d, kind="stable")[: self.k]
            out[i] = self.train_y[nearest].mean()
        return out


def fit_knn(spec: ModelSpec, X, y, **context) -> FittedModel:
    """Store the training set; prediction averages the k nearest targets."""
    X, y = check_xy(X, y)
    k = spec.params["k"]
    if not 1 <= k <= X.shape[0]:
        raise KOutOfRange(f"knn k={k} outside 1..{X.shape[0]}")
    return FittedModel(spec=spec, state=KnnState(k, X.copy(), y.copy()), **context)
