"""Estimator families behind one fit/predict contract."""

from __future__ import annotations

from ..errors import BadHyperparameter
from .ar4 import Ar4State, fit_ar4
from .base import FAMILIES, FittedModel, ModelSpec, predict
from .io import load_model, model_from_dict, model_to_dict, save_model
from .linear import (
    CD_MAX_SWEEPS,
    CD_TOL,
    coordinate_descent,
    fit_linear_family,
    fit_ols_log,
    fit_pcr,
    soft_threshold,
)
from .neighbors import fit_knn
from .svr import fit_svr, svr_objective
from .trees import TreeNode, build_tree, fit_gbt, fit_random_forest, tree_predict

_FITTERS = {
    "ols": fit_linear_family,
    "ridge": fit_linear_family,
    "lasso": fit_linear_family,
    "enet": fit_linear_family,
    "pcr": fit_pcr,
    "knn": fit_knn,
    "svr": fit_svr,
    "rf": fit_random_forest,
    "gbt": fit_gbt,
}


def fit_model(spec: ModelSpec, X, y, **context) -> FittedModel:
    """Dispatch to the family fitter; ar4 is fit from levels via fit_ar4."""
    if spec.family not in _FITTERS:
        raise BadHyperparameter(f"{spec.family}: not fit from a feature matrix")
    return _FITTERS[spec.family](spec, X, y, **context)


__all__ = [
    "FAMILIES",
    "FittedModel",
    "ModelSpec",
    "TreeNode",
    "Ar4State",
    "CD_MAX_SWEEPS",
    "CD_TOL",
    "build_tree",
    "coordinate_descent",
    "fit_ar4",
    "fit_gbt",
    "fit_knn",
    "fit_linear_family",
    "fit_model",
    "fit_ols_log",
    "fit_pcr",
    "fit_random_forest",
    "fit_svr",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "save_model",
    "soft_threshold",
    "svr_objective",
    "tree_predict",
]
