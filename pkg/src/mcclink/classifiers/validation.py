"""Stratified k-fold assignment and cross-validation driver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from mcclink.errors import InputError
from mcclink.features import FeatureTable
from mcclink.metrics import auroc, confusion, metrics, roc_curve


def stratified_kfold(
    labels: Sequence[int], k: int, seed: int = 0
) -> list[np.ndarray]:
    """Split row indices into k folds, each preserving class balance.

    Rows of each class are shuffled then dealt round-robin, with the
    dealing position carried over between classes so overall fold sizes
    differ by at most one.
    """
    y = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise InputError(f"need at least 2 folds, got {k}")
    classes = sorted(set(y.tolist()))
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in classes:
        members = np.flatnonzero(y == cls)
        if len(members) < k:
            raise InputError(
                f"class {cls} has {len(members)} rows, fewer than {k} folds"
            )
        perm = rng.permutation(members)
        for j, idx in enumerate(perm):
            folds[(offset + j) % k].append(int(idx))
        offset = (offset + len(members)) % k
    return [np.asarray(sorted(f), dtype=np.int64) for f in folds]


@dataclass(frozen=True)
class FoldMetrics:
    accuracy: float
    precision: float
    recall: float
    f_measure: float
    auroc: float


@dataclass(frozen=True)
class CvResult:
    folds: tuple[FoldMetrics, ...]

    def _mean(self, attr: str) -> float:
        return float(np.mean([getattr(f, attr) for f in self.folds]))

    @property
    def mean_accuracy(self) -> float:
        return self._mean("accuracy")

    @property
    def mean_precision(self) -> float:
        return self._mean("precision")

    @property
    def mean_recall(self) -> float:
        return self._mean("recall")

    @property
    def mean_f_measure(self) -> float:
        return self._mean("f_measure")

    @property
    def mean_auroc(self) -> float:
        return self._mean("auroc")

    def to_dict(self) -> dict:
        return {
            "folds": [
                {
                    "accuracy": f.accuracy,
                    "precision": f.precision,
                    "recall": f.recall,
                    "f_measure": f.f_measure,
                    "auroc": f.auroc,
                }
                for f in self.folds
            ],
            "mean_accuracy": self.mean_accuracy,
            "mean_precision": self.mean_precision,
            "mean_recall": self.mean_recall,
            "mean_f_measure": self.mean_f_measure,
            "mean_auroc": self.mean_auroc,
        }


def cross_validate(
    t: FeatureTable,
    k: int,
    trainer: Callable[[FeatureTable], object],
    seed: int = 0,
) -> CvResult:
    """Stratified k-fold CV; each fold is scored with the full metric set."""
    fold_indices = stratified_kfold(t.labels, k, seed)
    n = len(t)
    all_idx = np.arange(n)
    fold_metrics = []
    for fold in fold_indices:
        mask = np.ones(n, dtype=bool)
        mask[fold] = False
        model = trainer(t.subset(all_idx[mask]))
        test = t.subset(fold)
        pred, scores = model.predict_matrix(test.matrix)
        truth = test.labels
        mr = metrics(confusion(pred, truth))
        fold_auroc = auroc(roc_curve(scores, truth))
        fold_metrics.append(
            FoldMetrics(
                accuracy=mr.accuracy,
                precision=mr.precision,
                recall=mr.recall,
                f_measure=mr.f_measure,
                auroc=fold_auroc,
            )
        )
    return CvResult(folds=tuple(fold_metrics))
