"""CART regression trees, bagged forests and squared-error gradient boosting.

Splits minimize the summed child SSE over midpoints between consecutive
distinct feature values; ties resolve to the lowest feature index, then the
lowest threshold. Rows with feature value <= threshold go left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import BadHyperparameter
from ..numeric import RngStream
from .base import FittedModel, ModelSpec, check_xy


class TreeNode:
    """Internal node (feature, threshold, children) or leaf (value)."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature=None, threshold=None, left=None, right=None, value=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _best_split(X, y, features, min_leaf):
    """(child_sse, feature, threshold) of the best valid split, else None."""
    n = y.shape[0]
    tot = y.sum()
    tot2 = float(y @ y)
    best_sse = np.inf
    best = None
    counts = np.arange(1, n)
    for f in features:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        cum = np.cumsum(ys)[:-1]
        cum2 = np.cumsum(ys * ys)[:-1]
        sse_left = cum2 - cum**2 / counts
        sse_right = (tot2 - cum2) - (tot - cum) ** 2 / (n - counts)
        child = sse_left + sse_right
        valid = (counts >= min_leaf) & ((n - counts) >= min_leaf) & (xs[1:] > xs[:-1])
        if not valid.any():
            continue
        child = np.where(valid, child, np.inf)
        i = int(np.argmin(child))  # first minimum -> lowest threshold on ties
        if child[i] < best_sse:  # strict -> lowest feature index on ties
            best_sse = float(child[i])
            best = (best_sse, f, 0.5 * (xs[i] + xs[i + 1]))
    return best


def build_tree(
    X,
    y,
    *,
    max_depth: int | None,
    min_leaf: int,
    mtry: int,
    rng: np.random.Generator,
    leaf_shrink: float = 0.0,
) -> TreeNode:
    """Grow a CART tree; leaf value is sum(y) / (count + leaf_shrink)."""

    def leaf(yv):
        return TreeNode(value=float(yv.sum() / (yv.shape[0] + leaf_shrink)))

    def grow(Xv, yv, depth):
        n, p = Xv.shape
        if max_depth is not None and depth >= max_depth:
            return leaf(yv)
        if n < 2 * min_leaf:
            return leaf(yv)
        parent_sse = float(((yv - yv.mean()) ** 2).sum())
        if parent_sse <= 0.0:
            return leaf(yv)
        if mtry < p:
            features = np.sort(rng.choice(p, size=mtry, replace=False))
        else:
            features = range(p)
        found = _best_split(Xv, yv, features, min_leaf)
        if found is None or found[0] >= parent_sse:
            return leaf(yv)
        _, f, thr = found
        mask = Xv[:, f] <= thr
        return TreeNode(
            feature=int(f),
            threshold=float(thr),
            left=grow(Xv[mask], yv[mask], depth + 1),
            right=grow(Xv[~mask], yv[~mask], depth + 1),
        )

    return grow(X, y, 0)


def tree_predict(node: TreeNode, X) -> np.ndarray:
    """Vectorized tree traversal."""
    out = np.empty(X.shape[0])
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        cur, idx = stack.pop()
        if cur.is_leaf:
            out[idx] = cur.value
            continue
        mask = X[idx, cur.feature] <= cur.threshold
        stack.append((cur.left, idx[mask]))
        stack.append((cur.right, idx[~mask]))
    return out


@dataclass(frozen=True)
class ForestState:
    kind = "rf"
    trees: tuple[TreeNode, ...]
    n_features_: int

    @property
    def n_features(self) -> int:
        return self.n_features_

    def predict_raw(self, X) -> np.ndarray:
        preds = np.stack([tree_predict(t, X) for t in self.trees])
        return preds.mean(axis=0)


def fit_random_forest(spec: ModelSpec, X, y, **context) -> FittedModel:
    """Bagged CART trees: bootstrap rows per tree, mtry features per node."""
    X, y = check_xy(X, y)
    n, p = X.shape
    params = spec.params
    if params["mtry"] > p:
        raise BadHyperparameter(f"rf: mtry={params['mtry']} > {p} features")
    stream = RngStream(spec.seed if spec.seed is not None else 0, "rf")
    trees = []
    for i in range(params["trees"]):
        rng = stream.substream(f"tree/{i}").generator()
        if params["bootstrap"]:
            idx = rng.integers(0, n, size=n)
            xb, yb = X[idx], y[idx]
        else:
            xb, yb = X, y
        trees.append(
            build_tree(
                xb,
                yb,
                max_depth=params["max_depth"],
                min_leaf=params["min_leaf"],
                mtry=params["mtry"],
                rng=rng,
            )
        )
    state = ForestState(trees=tuple(trees), n_features_=p)
    return FittedModel(spec=spec, state=state, **context)


@dataclass(frozen=True)
class BoostState:
    kind = "gbt"
    base: float
    learning_rate: float
    trees: tuple[TreeNode, ...]
    n_features_: int
    train_losses: tuple[float, ...] = field(default=())

    @property
    def n_features(self) -> int:
        return self.n_features_

    def predict_raw(self, X) -> np.ndarray:
        out = np.full(X.shape[0], self.base)
        for t in self.trees:
            out += self.learning_rate * tree_predict(t, X)
        return out


def fit_gbt(spec: ModelSpec, X, y, **context) -> FittedModel:
    """First-order squared-error boosting with shrunk leaf values.

    Each round fits a depth-limited tree to the current residuals; leaves
    predict sum(residuals) / (count + lambda_reg). Mean squared residual is
    recorded after every round.
    """
    X, y = check_xy(X, y)
    n, p = X.shape
    params = spec.params
    base = float(y.mean())
    pred = np.full(n, base)
    lr = params["learning_rate"]
    rng = RngStream(spec.seed if spec.seed is not None else 0, "gbt").generator()
    trees = []
    losses = []
    for _ in range(params["trees"]):
        resid = y - pred
        tree = build_tree(
            X,
            resid,
            max_depth=params["max_depth"],
            min_leaf=params["min_leaf"],
            mtry=p,
            rng=rng,
            leaf_shrink=params["lambda_reg"],
        )
        pred += lr * tree_predict(tree, X)
        trees.append(tree)
        losses.append(float(((y - pred) ** 2).mean()))
    state = BoostState(
        base=base,
        learning_rate=lr,
        trees=tuple(trees),
        n_features_=p,
        train_losses=tuple(losses),
    )
    return FittedModel(spec=spec, state=state, **context)
