"""Binary decision tree split on information gain.

Candidate thresholds are midpoints between consecutive distinct sorted
values of each feature; the split maximizing information gain wins,
with ties broken by lower feature index then lower threshold.  There is
no pruning; regularization comes from min-leaf-size and max-depth.
Leaves keep their class counts so prediction can report a
Laplace-smoothed suspicious fraction as the score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from mcclink.errors import InputError
from mcclink.features import FeatureRow, FeatureTable

N_FEATURES = 5


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, int]

    @property
    def score(self) -> float:
        n0, n1 = self.counts
        return (n1 + 1) / (n0 + n1 + 2)


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


def _entropy(n0: float, n1: float) -> float:
    n = n0 + n1
    if n <= 0 or n0 <= 0 or n1 <= 0:
        return 0.0
    p0 = n0 / n
    p1 = n1 / n
    return -(p0 * math.log2(p0) + p1 * math.log2(p1))


def _entropy_arrays(c0: np.ndarray, c1: np.ndarray) -> np.ndarray:
    n = c0 + c1
    h = np.zeros_like(n, dtype=np.float64)
    for c in (c0, c1):
        p = np.divide(c, n, out=np.zeros_like(h), where=n > 0)
        mask = p > 0
        term = np.zeros_like(h)
        np.log2(p, out=term, where=mask)
        h -= p * term
    return h


def _best_split(
    X: np.ndarray, y: np.ndarray, min_leaf: int
) -> tuple[float, int, float] | None:
    """Highest-gain (gain, feature, threshold) over all candidates, or
    None when no split satisfies the leaf-size constraint."""
    n = len(y)
    n1 = int(y.sum())
    n0 = n - n1
    parent = _entropy(n0, n1)
    best: tuple[float, int, float] | None = None
    for f in range(X.shape[1]):
        vals = X[:, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        sy = y[order]
        cum1 = np.cumsum(sy)
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        l1 = cum1[:-1].astype(np.float64)
        l0 = nl - l1
        r1 = n1 - l1
        r0 = nr - r1
        gains = parent - (nl / n) * _entropy_arrays(l0, l1) - (nr / n) * _entropy_arrays(
            r0, r1
        )
        valid = (sv[1:] > sv[:-1]) & (nl >= min_leaf) & (nr >= min_leaf)
        if not valid.any():
            continue
        gains = np.where(valid, gains, -np.inf)
        pos = int(np.argmax(gains))
        gain = float(gains[pos])
        if best is None or gain > best[0]:
            thr = (float(sv[pos]) + float(sv[pos + 1])) / 2.0
            best = (gain, f, thr)
    return best


def _build(
    X: np.ndarray, y: np.ndarray, depth: int, min_leaf: int, max_depth: int
) -> TreeNode:
    n1 = int(y.sum())
    n0 = len(y) - n1
    if n0 == 0 or n1 == 0 or depth >= max_depth or len(y) < 2 * min_leaf:
        return Leaf((n0, n1))
    found = _best_split(X, y, min_leaf)
    if found is None or found[0] <= 0.0:
        return Leaf((n0, n1))
    _, f, thr = found
    mask = X[:, f] <= thr
    return Split(
        feature=f,
        threshold=thr,
        left=_build(X[mask], y[mask], depth + 1, min_leaf, max_depth),
        right=_build(X[~mask], y[~mask], depth + 1, min_leaf, max_depth),
    )


@dataclass(frozen=True)
class DecisionTreeModel:
    root: TreeNode
    min_leaf: int
    max_depth: int

    def _leaf_for(self, x) -> Leaf:
        node = self.root
        while isinstance(node, Split):
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def predict_row(self, row: FeatureRow) -> tuple[int, float]:
        return self.predict_vector(row.values)

    def predict_vector(self, x) -> tuple[int, float]:
        score = self._leaf_for(x).score
        return (1 if score > 0.5 else 0, score)

    def predict_matrix(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        scores = np.fromiter(
            (self._leaf_for(x).score for x in X), dtype=np.float64, count=len(X)
        )
        return (scores > 0.5).astype(np.int64), scores

    def depth(self) -> int:
        def walk(node: TreeNode) -> int:
            if isinstance(node, Leaf):
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


def train_decision_tree(
    train: FeatureTable, min_leaf: int = 2, max_depth: int = 12
) -> DecisionTreeModel:
    if len(train) == 0:
        raise InputError("cannot train a decision tree on an empty table")
    if min_leaf < 1:
        raise InputError(f"min_leaf must be >= 1, got {min_leaf}")
    if max_depth < 0:
        raise InputError(f"max_depth must be >= 0, got {max_depth}")
    X = train.matrix
    y = train.labels
    root = _build(X, y, 0, min_leaf, max_depth)
    return DecisionTreeModel(root=root, min_leaf=min_leaf, max_depth=max_depth)
