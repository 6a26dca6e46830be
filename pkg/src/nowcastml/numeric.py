"""Shared numerical kernels: least squares, PCA, quantiles, seeded RNG streams."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyInput,
    NonFiniteInput,
    QOutOfRange,
    RankDeficient,
    ShapeMismatch,
)

# Singular values below RANK_TOL * s_max count as zero when deciding rank.
RANK_TOL = 1e-10


def as_matrix(x) -> np.ndarray:
    """Coerce to a finite 2-D float64 array."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput("matrix contains non-finite entries")
    return a


def as_vector(x) -> np.ndarray:
    """Coerce to a finite 1-D float64 array."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise ShapeMismatch(f"expected a 1-D vector, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput("vector contains non-finite entries")
    return a


def solve_least_squares(X, y) -> np.ndarray:
    """Return argmin_b ||y - X b||_2 via SVD.

    Requires n >= p and numerical full column rank (smallest singular value
    above RANK_TOL relative to the largest); raises RankDeficient otherwise.
    """
    X = as_matrix(X)
    y = as_vector(y)
    n, p = X.shape
    if y.shape[0] != n:
        raise ShapeMismatch(f"X has {n} rows but y has {y.shape[0]}")
    if n < p:
        raise ShapeMismatch(f"underdetermined system: n={n} < p={p}")
    u, s, vt = np.linalg.svd(X, full_matrices=False)
    if s[0] == 0.0:
        raise RankDeficient("zero matrix has rank 0")
    rank = int(np.sum(s > RANK_TOL * s[0]))
    if rank < p:
        raise RankDeficient(f"numerical rank {rank} < {p} columns")
    return vt.T @ ((u.T @ y) / s)


@dataclass(frozen=True)
class PcaResult:
    """Principal axes of a data matrix.

    ``loadings`` columns are orthonormal, ordered by decreasing explained
    variance, and sign-fixed so each column's largest-magnitude entry is
    positive.
    """

    column_means: np.ndarray
    loadings: np.ndarray
    explained_variance: np.ndarray

    def transform(self, X, k: int | None = None) -> np.ndarray:
        """Project rows onto the first ``k`` components (all by default)."""
        X = as_matrix(X)
        if X.shape[1] != self.column_means.shape[0]:
            raise ShapeMismatch(
                f"expected {self.column_means.shape[0]} columns, got {X.shape[1]}"
            )
        load = self.loadings if k is None else self.loadings[:, :k]
        return (X - self.column_means) @ load


def pca(X) -> PcaResult:
    """Eigendecomposition of the sample covariance of column-centered X."""
    X = as_matrix(X)
    n, p = X.shape
    if n < 2:
        raise ShapeMismatch(f"pca needs at least 2 rows, got {n}")
    means = X.mean(axis=0)
    xc = X - means
    cov = (xc.T @ xc) / (n - 1)
    eigval, eigvec = np.linalg.eigh(cov)
    order = np.argsort(eigval)[::-1]
    eigval = np.clip(eigval[order], 0.0, None)
    eigvec = eigvec[:, order]
    # deterministic sign: largest-|entry| of each loading is positive
    for j in range(p):
        i = int(np.argmax(np.abs(eigvec[:, j])))
        if eigvec[i, j] < 0:
            eigvec[:, j] = -eigvec[:, j]
    return PcaResult(column_means=means, loadings=eigvec, explained_variance=eigval)


def quantile(values, q: float) -> float:
    """Linear interpolation at 0-based position (n-1)*q of the sorted values."""
    v = as_vector(values)
    if v.size == 0:
        raise EmptyInput("quantile of an empty list")
    if not 0.0 <= q <= 1.0:
        raise QOutOfRange(f"q={q} outside [0, 1]")
    s = np.sort(v)
    pos = (s.size - 1) * q
    lo = int(np.floor(pos))
    hi = int(np.ceil(pos))
    if lo == hi:
        return float(s[lo])
    frac = pos - lo
    return float(s[lo] + frac * (s[hi] - s[lo]))


@dataclass(frozen=True)
class RngStream:
    """Labelled, platform-stable random stream.

    The (seed, label) pair is hashed with SHA-256 into the PCG64 seed, so the
    same pair yields the same draws on every platform, and distinct labels
    give independent substreams of one global seed.
    """

    seed: int
    label: str = ""

    def substream(self, label: str) -> "RngStream":
        child = f"{self.label}/{label}" if self.label else label
        return RngStream(self.seed, child)

    def child_seed(self, label: str = "") -> int:
        """A stable 63-bit integer derived from (seed, label, extra label)."""
        tag = f"{self.label}/{label}" if label else self.label
        digest = hashlib.sha256(f"{self.seed}:{tag}".encode()).digest()
        return int.from_bytes(digest[:8], "big") >> 1

    def generator(self) -> np.random.Generator:
        digest = hashlib.sha256(f"{self.seed}:{self.label}".encode()).digest()
        entropy = int.from_bytes(digest, "big")
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
