"""Versioned plain-text serialization of fitted models.

Models are stored as a JSON document (key/value, human-readable) holding the
spec, feature metadata, scaler linkage and the family-specific learned state.
Floats round-trip exactly through JSON, so a reloaded model produces
bit-identical predictions.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import ModelFormatError
from .ar4 import Ar4State
from .base import FittedModel, ModelSpec
from .linear import LinearState, LogLinearState, PcrState
from .neighbors import KnnState
from .svr import SvrState
from .trees import BoostState, ForestState, TreeNode

FORMAT_NAME = "nowcastml-model"
FORMAT_VERSION = 1


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"value": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(d: dict) -> TreeNode:
    if "value" in d:
        return TreeNode(value=d["value"])
    return TreeNode(
        feature=d["feature"],
        threshold=d["threshold"],
        left=_tree_from_dict(d["left"]),
        right=_tree_from_dict(d["right"]),
    )


def _state_to_dict(state) -> dict:
    kind = state.kind
    if kind == "linear":
        return {"kind": kind, "intercept": state.intercept, "coef": state.coef.tolist()}
    if kind == "ols_log":
        return {"kind": kind, "intercept": state.intercept, "coef": state.coef.tolist()}
    if kind == "pcr":
        return {
            "kind": kind,
            "column_means": state.column_means.tolist(),
            "loadings": state.loadings.tolist(),
            "intercept": state.intercept,
            "theta": state.theta.tolist(),
        }
    if kind == "knn":
        return {
            "kind": kind,
            "k": state.k,
            "train_x": state.train_x.tolist(),
            "train_y": state.train_y.tolist(),
        }
    if kind == "svr":
        return {"kind": kind, "w": state.w.tolist(), "b": state.b}
    if kind == "rf":
        return {
            "kind": kind,
            "n_features": state.n_features_,
            "trees": [_tree_to_dict(t) for t in state.trees],
        }
    if kind == "gbt":
        return {
            "kind": kind,
            "base": state.base,
            "learning_rate": state.learning_rate,
            "n_features": state.n_features_,
            "train_losses": list(state.train_losses),
            "trees": [_tree_to_dict(t) for t in state.trees],
        }
    if kind == "ar4":
        return {
            "kind": kind,
            "phi": state.phi.tolist(),
            "last_growths": state.last_growths.tolist(),
            "last_levels": state.last_levels.tolist(),
        }
    raise ModelFormatError(f"cannot serialize state kind {kind!r}")


def _state_from_dict(d: dict):
    kind = d.get("kind")
    arr = lambda key: np.asarray(d[key], dtype=np.float64)
    if kind == "linear":
        return LinearState(intercept=d["intercept"], coef=arr("coef"))
    if kind == "ols_log":
        return LogLinearState(intercept=d["intercept"], coef=arr("coef"))
    if kind == "pcr":
        return PcrState(
            column_means=arr("column_means"),
            loadings=arr("loadings"),
            intercept=d["intercept"],
            theta=arr("theta"),
        )
    if kind == "knn":
        return KnnState(k=d["k"], train_x=arr("train_x"), train_y=arr("train_y"))
    if kind == "svr":
        return SvrState(w=arr("w"), b=d["b"])
    if kind == "rf":
        return ForestState(
            trees=tuple(_tree_from_dict(t) for t in d["trees"]),
            n_features_=d["n_features"],
        )
    if kind == "gbt":
        return BoostState(
            base=d["base"],
            learning_rate=d["learning_rate"],
            trees=tuple(_tree_from_dict(t) for t in d["trees"]),
            n_features_=d["n_features"],
            train_losses=tuple(d["train_losses"]),
        )
    if kind == "ar4":
        return Ar4State(
            phi=arr("phi"),
            last_growths=arr("last_growths"),
            last_levels=arr("last_levels"),
        )
    raise ModelFormatError(f"unknown state kind {kind!r}")


def model_to_dict(model: FittedModel) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "family": model.spec.family,
        "params": dict(model.spec.params),
        "seed": model.spec.seed,
        "feature_names": list(model.feature_names) if model.feature_names else None,
        "target_name": model.target_name,
        "target_scale": list(model.target_scale) if model.target_scale else None,
        "state": _state_to_dict(model.state),
    }


def model_from_dict(doc: dict) -> FittedModel:
    if doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version {doc.get('version')!r}")
    spec = ModelSpec(doc["family"], doc.get("params", {}), seed=doc.get("seed"))
    names = doc.get("feature_names")
    scale = doc.get("target_scale")
    return FittedModel(
        spec=spec,
        state=_state_from_dict(doc["state"]),
        feature_names=tuple(names) if names else None,
        target_name=doc.get("target_name"),
        target_scale=tuple(scale) if scale else None,
    )


def save_model(model: FittedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_model(path) -> FittedModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"{path}: invalid model file: {e}") from None
    return model_from_dict(doc)
