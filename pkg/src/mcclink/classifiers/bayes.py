"""Gaussian naive Bayes over the five features.

Class priors are maximum-likelihood counts; each (class, feature) pair
gets a Gaussian with ML mean/variance.  Variances are floored at
1e-9 times the largest overall feature variance so a constant feature
cannot collapse the likelihood.  Prediction maximizes the posterior
numerator prior * product of per-feature densities; the reported score
is the normalized suspicious-class posterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mcclink.errors import InputError
from mcclink.features import FeatureRow, FeatureTable

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class NaiveBayesModel:
    priors: tuple[float, float]
    means: tuple[tuple[float, ...], tuple[float, ...]]
    variances: tuple[tuple[float, ...], tuple[float, ...]]
    var_floor: float

    def log_numerators(self, x) -> tuple[float, float]:
        """Log of prior times the feature-density product, per class."""
        out = []
        for cls in (0, 1):
            total = math.log(self.priors[cls])
            mu = self.means[cls]
            var = self.variances[cls]
            for j, xj in enumerate(x):
                diff = float(xj) - mu[j]
                total += -0.5 * (_LOG_2PI + math.log(var[j])) - diff * diff / (
                    2.0 * var[j]
                )
            out.append(total)
        return out[0], out[1]

    def predict_vector(self, x) -> tuple[int, float]:
        l0, l1 = self.log_numerators(x)
        top = max(l0, l1)
        e0 = math.exp(l0 - top)
        e1 = math.exp(l1 - top)
        score = e1 / (e0 + e1)
        return (1 if l1 > l0 else 0, score)

    def predict_row(self, row: FeatureRow) -> tuple[int, float]:
        return self.predict_vector(row.values)

    def predict_matrix(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        labels = np.zeros(len(X), dtype=np.int64)
        scores = np.zeros(len(X), dtype=np.float64)
        for i, x in enumerate(X):
            labels[i], scores[i] = self.predict_vector(x)
        return labels, scores


def train_naive_bayes(train: FeatureTable) -> NaiveBayesModel:
    if len(train) == 0:
        raise InputError("cannot train naive Bayes on an empty table")
    X = train.matrix
    y = train.labels
    n = len(y)
    overall_var = float(X.var(axis=0, ddof=0).max()) if n else 0.0
    floor = 1e-9 * overall_var
    if floor <= 0.0:
        floor = 1e-12
    priors = []
    means = []
    variances = []
    for cls in (0, 1):
        rows = X[y == cls]
        if len(rows) < 2:
            raise InputError(
                f"class {cls} has {len(rows)} rows; need at least 2 to fit a variance"
            )
        priors.append(len(rows) / n)
        means.append(tuple(float(v) for v in rows.mean(axis=0)))
        variances.append(
            tuple(float(v) for v in np.maximum(rows.var(axis=0, ddof=0), floor))
        )
    return NaiveBayesModel(
        priors=(priors[0], priors[1]),
        means=(means[0], means[1]),
        variances=(variances[0], variances[1]),
        var_floor=floor,
    )
