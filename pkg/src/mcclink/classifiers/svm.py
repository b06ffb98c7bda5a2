"""Soft-margin SVM with an RBF kernel, trained by SMO.

The Gram matrix is precomputed with K(x, z) = exp(-gamma * ||x - z||^2)
and handed to the backend SMO kernel.  Working-pair selection follows
the second-choice heuristic (maximise |E_i - E_j| over non-bound
points) with seeded scan-start fallbacks, so training is deterministic
for a given seed.  Grid search is exhaustive over (gamma, C) with
shared stratified CV folds; ties go to smaller C, then smaller gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mcclink import backend
from mcclink.errors import ConvergenceError, InputError
from mcclink.features import FeatureRow, FeatureTable
from mcclink.classifiers.validation import stratified_kfold

DEFAULT_GAMMAS = (0.01, 0.1, 1.0, 5.0, 10.0)
DEFAULT_CS = (0.1, 1.0, 3.0, 9.0, 27.0)


def rbf_gram(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise exp(-gamma * squared distance) between row sets."""
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass(frozen=True)
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i per support vector
    bias: float
    gamma: float
    c: float
    sweeps: int

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        if len(self.support_vectors) == 0:
            return np.full(len(X), self.bias, dtype=np.float64)
        K = rbf_gram(np.asarray(X, dtype=np.float64), self.support_vectors, self.gamma)
        return K @ self.dual_coef + self.bias

    def predict_matrix(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        dv = self.decision_values(X)
        scores = 1.0 / (1.0 + np.exp(-np.clip(dv, -500.0, 500.0)))
        return (dv > 0).astype(np.int64), scores

    def predict_vector(self, x) -> tuple[int, float]:
        labels, scores = self.predict_matrix(np.asarray([x], dtype=np.float64))
        return int(labels[0]), float(scores[0])

    def predict_row(self, row: FeatureRow) -> tuple[int, float]:
        return self.predict_vector(row.values)


def train_svm_rbf(
    train: FeatureTable,
    gamma: float,
    c: float,
    tol: float = 1e-3,
    max_passes: int = 4000,
    seed: int = 0,
) -> SvmModel:
    if gamma <= 0 or c <= 0:
        raise InputError(f"gamma and c must be positive, got gamma={gamma}, c={c}")
    X = train.matrix
    labels = train.labels
    if len(set(labels.tolist())) < 2:
        raise InputError("SVM training needs both classes present")
    y = np.where(labels == 1, 1.0, -1.0)
    K = rbf_gram(X, X, gamma)
    alpha, bias, sweeps, converged = backend.smo_solve(
        K, y, float(c), float(tol), int(max_passes), int(seed)
    )
    if not converged:
        raise ConvergenceError(
            f"SMO did not converge within {sweeps} sweeps "
            f"(gamma={gamma}, c={c})",
            iterations=sweeps,
        )
    alpha = np.asarray(alpha, dtype=np.float64)
    keep = alpha > 1e-12
    return SvmModel(
        support_vectors=np.ascontiguousarray(X[keep]),
        dual_coef=np.ascontiguousarray(alpha[keep] * y[keep]),
        bias=float(bias),
        gamma=float(gamma),
        c=float(c),
        sweeps=int(sweeps),
    )


@dataclass(frozen=True)
class GridCell:
    gamma: float
    c: float
    accuracy: float | None
    error: str | None


@dataclass(frozen=True)
class GridSearchResult:
    best_gamma: float
    best_c: float
    cv_accuracy: float
    cells: tuple[GridCell, ...]


def grid_search_svm(
    train: FeatureTable,
    gammas=DEFAULT_GAMMAS,
    cs=DEFAULT_CS,
    folds: int = 10,
    seed: int = 0,
    tol: float = 1e-3,
    max_passes: int = 4000,
) -> GridSearchResult:
    """Exhaustive (gamma, C) sweep scored by mean stratified-CV accuracy.

    All cells share the same folds.  A cell whose training fails is
    recorded with its error and can never win.
    """
    if not gammas or not cs:
        raise InputError("grid search needs at least one gamma and one c")
    if folds < 2:
        raise InputError(f"folds must be >= 2, got {folds}")
    labels = train.labels
    fold_indices = stratified_kfold(labels, folds, seed)
    all_idx = np.arange(len(train))
    cells: list[GridCell] = []
    best: tuple[float, float, float] | None = None  # (accuracy, c, gamma)
    for c in sorted(float(x) for x in cs):
        for gamma in sorted(float(x) for x in gammas):
            try:
                accs = []
                for fold in fold_indices:
                    mask = np.ones(len(train), dtype=bool)
                    mask[fold] = False
                    sub_train = train.subset(all_idx[mask])
                    sub_test = train.subset(fold)
                    model = train_svm_rbf(
                        sub_train, gamma, c, tol=tol, max_passes=max_passes, seed=seed
                    )
                    pred, _ = model.predict_matrix(sub_test.matrix)
                    accs.append(float(np.mean(pred == sub_test.labels)))
                accuracy = float(np.mean(accs))
            except (ConvergenceError, InputError) as exc:
                cells.append(GridCell(gamma=gamma, c=c, accuracy=None, error=str(exc)))
                continue
            cells.append(GridCell(gamma=gamma, c=c, accuracy=accuracy, error=None))
            if best is None or accuracy > best[0]:
                best = (accuracy, c, gamma)
    if best is None:
        failures = "; ".join(f"({cell.gamma},{cell.c}): {cell.error}" for cell in cells)
        raise InputError(f"every grid cell failed: {failures}")
    return GridSearchResult(
        best_gamma=best[2],
        best_c=best[1],
        cv_accuracy=best[0],
        cells=tuple(cells),
    )
