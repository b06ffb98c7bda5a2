"""Confusion matrix, classification metrics, ROC curve, and AUROC.

Suspicious is the positive class throughout.  The confusion matrix uses
the four-cell layout (a, b, c, d) = (predicted-normal actual-normal,
predicted-normal actual-suspicious, predicted-suspicious actual-normal,
predicted-suspicious actual-suspicious) and the metric formulas are

    precision = d / (c + d)        recall = d / (b + d)
    accuracy  = (a + d) / total    f = 2PR / (P + R)
    fpr       = b / (a + b)

A zero denominator yields 0 and raises a degenerate flag instead of
failing, so sweeps over poor folds stay total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mcclink.errors import InputError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with suspicious as positive: a/b predicted normal,
    c/d predicted suspicious; a/c actually normal, b/d actually suspicious."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) < 0:
                raise InputError(f"confusion count {name} is negative")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class MetricsResult:
    precision: float
    recall: float
    accuracy: float
    f_measure: float
    fpr: float
    degenerate: tuple[str, ...] = ()


def _as_label_array(values, name: str) -> np.ndarray:
    arr = np.asarray(list(values))
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise InputError(f"{name} must contain only 0/1 labels")
    return arr.astype(np.int64) if arr.size else np.zeros(0, dtype=np.int64)


def confusion(preds: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    """Tally the four cells from parallel 0/1 label vectors."""
    p = _as_label_array(preds, "preds")
    t = _as_label_array(truth, "truth")
    if len(p) != len(t):
        raise InputError(f"length mismatch: {len(p)} predictions, {len(t)} truths")
    return ConfusionMatrix(
        a=int(((p == 0) & (t == 0)).sum()),
        b=int(((p == 0) & (t == 1)).sum()),
        c=int(((p == 1) & (t == 0)).sum()),
        d=int(((p == 1) & (t == 1)).sum()),
    )


def _safe_div(num: float, den: float, flag: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


def metrics(m: ConfusionMatrix) -> MetricsResult:
    flags: list[str] = []
    precision = _safe_div(m.d, m.c + m.d, "precision", flags)
    recall = _safe_div(m.d, m.b + m.d, "recall", flags)
    accuracy = _safe_div(m.a + m.d, m.total, "accuracy", flags)
    f_measure = _safe_div(2 * precision * recall, precision + recall, "f_measure", flags)
    fpr = _safe_div(m.b, m.a + m.b, "fpr", flags)
    return MetricsResult(
        precision=precision,
        recall=recall,
        accuracy=accuracy,
        f_measure=f_measure,
        fpr=fpr,
        degenerate=tuple(flags),
    )


def roc_curve(
    scores: Sequence[float], truth: Sequence[int]
) -> list[tuple[float, float]]:
    """Threshold sweep over the distinct scores, descending.

    At threshold t every row with score >= t is predicted suspicious;
    rows sharing a score move together.  The curve is anchored at (0,0)
    and ends at (1,1).
    """
    s = np.asarray(list(scores), dtype=np.float64)
    t = _as_label_array(truth, "truth")
    if len(s) != len(t):
        raise InputError(f"length mismatch: {len(s)} scores, {len(t)} truths")
    pos = int(t.sum())
    neg = len(t) - pos
    if pos == 0 or neg == 0:
        raise InputError("ROC needs at least one row of each class")
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    t_sorted = t[order]
    tp = np.cumsum(t_sorted)
    fp = np.cumsum(1 - t_sorted)
    # last index of each tied block marks the threshold's prediction set
    block_end = np.nonzero(np.diff(s_sorted))[0]
    idx = np.concatenate([block_end, [len(s_sorted) - 1]])
    points = [(0.0, 0.0)]
    for i in idx:
        points.append((float(fp[i]) / neg, float(tp[i]) / pos))
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return points


def auroc(points: Sequence[tuple[float, float]]) -> float:
    """Trapezoidal area under an ROC polyline."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


@dataclass(frozen=True)
class EvalReport:
    confusion: ConfusionMatrix
    precision: float
    recall: float
    accuracy: float
    f_measure: float
    fpr: float
    degenerate: tuple[str, ...]
    roc: tuple[tuple[float, float], ...]
    auroc: float

    def to_dict(self) -> dict:
        return {
            "confusion": {
                "a": self.confusion.a,
                "b": self.confusion.b,
                "c": self.confusion.c,
                "d": self.confusion.d,
            },
            "precision": self.precision,
            "recall": self.recall,
            "accuracy": self.accuracy,
            "f_measure": self.f_measure,
            "fpr": self.fpr,
            "degenerate": list(self.degenerate),
            "roc": [[x, y] for x, y in self.roc],
            "auroc": self.auroc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        cm = ConfusionMatrix(**data["confusion"])
        return cls(
            confusion=cm,
            precision=data["precision"],
            recall=data["recall"],
            accuracy=data["accuracy"],
            f_measure=data["f_measure"],
            fpr=data["fpr"],
            degenerate=tuple(data["degenerate"]),
            roc=tuple((x, y) for x, y in data["roc"]),
            auroc=data["auroc"],
        )


def evaluate(
    preds: Sequence[int], truth: Sequence[int], scores: Sequence[float]
) -> EvalReport:
    """Assemble the full report from prediction, truth, and score vectors."""
    cm = confusion(preds, truth)
    mr = metrics(cm)
    roc = roc_curve(scores, truth)
    return EvalReport(
        confusion=cm,
        precision=mr.precision,
        recall=mr.recall,
        accuracy=mr.accuracy,
        f_measure=mr.f_measure,
        fpr=mr.fpr,
        degenerate=mr.degenerate,
        roc=tuple(roc),
        auroc=auroc(roc),
    )


def roc_to_csv(points: Sequence[tuple[float, float]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("fpr,tpr\n")
        for x, y in points:
            fh.write(f"{x:.6f},{y:.6f}\n")
