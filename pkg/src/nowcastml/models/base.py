"""Uniform fit/predict contract shared by every estimator family."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..errors import BadHyperparameter, FeatureMismatch
from ..numeric import as_matrix

FAMILIES = ("ols", "ridge", "lasso", "enet", "pcr", "knn", "svr", "rf", "gbt", "ar4")


def _check(cond: bool, family: str, name: str, value) -> None:
    if not cond:
        raise BadHyperparameter(f"{family}: {name}={value!r} out of range")


def _pos_int(family, name, v):
    _check(isinstance(v, int) and not isinstance(v, bool) and v >= 1, family, name, v)
    return v


def _depth(family, name, v):
    if v is None:  # unlimited
        return None
    return _pos_int(family, name, v)


def _nonneg(family, name, v):
    _check(isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0, family, name, v)
    return float(v)


def _positive(family, name, v):
    _check(isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0, family, name, v)
    return float(v)


def _unit_closed(family, name, v):
    _check(isinstance(v, (int, float)) and not isinstance(v, bool) and 0 <= v <= 1, family, name, v)
    return float(v)


def _unit_half_open(family, name, v):
    _check(isinstance(v, (int, float)) and not isinstance(v, bool) and 0 < v <= 1, family, name, v)
    return float(v)


def _flag(family, name, v):
    _check(isinstance(v, bool), family, name, v)
    return v


# required hyperparameters per family, and optional ones with defaults
_REQUIRED = {
    "ols": {},
    "ridge": {"lambda": _nonneg},
    "lasso": {"lambda": _nonneg},
    "enet": {"lambda": _nonneg, "alpha": _unit_closed},
    "pcr": {"k": _pos_int},
    "knn": {"k": _pos_int},
    "svr": {"c": _positive, "mu": _nonneg},
    "rf": {"trees": _pos_int, "max_depth": _depth, "min_leaf": _pos_int, "mtry": _pos_int},
    "gbt": {
        "trees": _pos_int,
        "max_depth": _depth,
        "learning_rate": _unit_half_open,
        "lambda_reg": _nonneg,
        "min_leaf": _pos_int,
    },
    "ar4": {},
}
_OPTIONAL = {
    "rf": {"bootstrap": (_flag, True)},
}


def family_param_names(family: str) -> set[str]:
    """Hyperparameter names (required and optional) accepted by a family."""
    if family not in FAMILIES:
        raise BadHyperparameter(f"unknown family {family!r}")
    return set(_REQUIRED[family]) | set(_OPTIONAL.get(family, {}))


@dataclass(frozen=True)
class ModelSpec:
    """Estimator family plus its hyperparameters (validated strictly)."""

    family: str
    params: Mapping[str, object] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadHyperparameter(f"unknown family {self.family!r}")
        required = _REQUIRED[self.family]
        optional = _OPTIONAL.get(self.family, {})
        given = dict(self.params)
        clean = {}
        for name, validate in required.items():
            if name not in given:
                raise BadHyperparameter(f"{self.family}: missing hyperparameter {name!r}")
            clean[name] = validate(self.family, name, given.pop(name))
        for name, (validate, default) in optional.items():
            clean[name] = validate(self.family, name, given.pop(name, default))
        if given:
            raise BadHyperparameter(
                f"{self.family}: unknown hyperparameters {sorted(given)}"
            )
        object.__setattr__(self, "params", clean)


@dataclass(frozen=True)
class FittedModel:
    """A trained estimator with a uniform predict contract.

    ``state`` is the family-specific learned object. ``target_scale`` is the
    (median, divisor) pair of the robust-scaled training target; when present,
    raw predictions are mapped back to target levels inside :func:`predict`.
    """

    spec: ModelSpec
    state: object
    feature_names: tuple[str, ...] | None = None
    target_name: str | None = None
    target_scale: tuple[float, float] | None = None


def predict(model: FittedModel, X=None, *, horizon: int | None = None) -> np.ndarray:
    """Target-level predictions for feature rows, or an AR(4) forecast path.

    For the ar4 family ``X`` is ignored and ``horizon`` gives the number of
    quarters to forecast recursively from the end of training.
    """
    if model.spec.family == "ar4":
        if horizon is None or horizon < 1:
            raise FeatureMismatch("ar4 needs a positive forecast horizon")
        return model.state.forecast(horizon)
    X = as_matrix(X)
    expected = model.state.n_features
    if X.shape[1] != expected:
        raise FeatureMismatch(f"model expects {expected} features, got {X.shape[1]}")
    if model.feature_names is not None and len(model.feature_names) != expected:
        raise FeatureMismatch("feature name list inconsistent with trained state")
    raw = model.state.predict_raw(X)
    if model.target_scale is not None:
        median, divisor = model.target_scale
        return raw * divisor + median
    return raw


def check_xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate an aligned design matrix / target pair."""
    from ..numeric import as_vector

    X = as_matrix(X)
    y = as_vector(y)
    if X.shape[0] != y.shape[0]:
        raise FeatureMismatch(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    return X, y
