"""Forecast combination: inverse-MSE weights and the weighted-mean nowcast."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import MemberMismatch, NonPositiveMse, TooFewMembers
from .numeric import as_matrix

WEIGHT_BASES = ("validation_mse", "test_mse")


@dataclass(frozen=True)
class EnsembleWeights:
    """Normalized nonnegative member weights plus the MSE basis they came from."""

    members: tuple[str, ...]
    weights: np.ndarray
    basis: str


def compute_weights(mse_per_member: Mapping[str, float], basis: str) -> EnsembleWeights:
    """Normalized inverse-MSE weights: w_i = (1/mse_i) / sum_j (1/mse_j)."""
    if basis not in WEIGHT_BASES:
        raise MemberMismatch(f"unknown weight basis {basis!r}")
    if len(mse_per_member) < 2:
        raise TooFewMembers(f"need at least 2 members, got {len(mse_per_member)}")
    members = tuple(mse_per_member)
    mse = np.array([mse_per_member[m] for m in members], dtype=np.float64)
    if np.any(~np.isfinite(mse)) or np.any(mse <= 0):
        bad = [m for m, v in zip(members, mse) if not (np.isfinite(v) and v > 0)]
        raise NonPositiveMse(f"non-positive or non-finite MSE for {bad}")
    inv = 1.0 / mse
    return EnsembleWeights(members=members, weights=inv / inv.sum(), basis=basis)


def ensemble_predict(predictions: np.ndarray, weights: EnsembleWeights) -> np.ndarray:
    """Weighted mean across members; rows of ``predictions`` follow weight order."""
    p = as_matrix(predictions)
    if p.shape[0] != len(weights.members):
        raise MemberMismatch(
            f"{p.shape[0]} prediction rows for {len(weights.members)} members"
        )
    return weights.weights @ p
