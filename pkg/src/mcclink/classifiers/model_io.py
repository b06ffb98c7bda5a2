"""Self-describing JSON serialization for trained models.

Every document carries a ``model_type`` tag and a ``version`` field.
Floats go through the JSON writer's shortest round-trip representation,
so save followed by load reproduces the model exactly.
"""

from __future__ import annotations

import json

import numpy as np

from mcclink.classifiers.bayes import NaiveBayesModel
from mcclink.classifiers.svm import SvmModel
from mcclink.classifiers.tree import DecisionTreeModel, Leaf, Split, TreeNode
from mcclink.errors import InputError

FORMAT_VERSION = 1


def _node_to_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "counts": list(node.counts)}
    return {
        "kind": "split",
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(data: dict) -> TreeNode:
    if data["kind"] == "leaf":
        n0, n1 = data["counts"]
        return Leaf((int(n0), int(n1)))
    if data["kind"] == "split":
        return Split(
            feature=int(data["feature"]),
            threshold=float(data["threshold"]),
            left=_node_from_dict(data["left"]),
            right=_node_from_dict(data["right"]),
        )
    raise InputError(f"unknown tree node kind {data.get('kind')!r}")


def model_to_dict(model) -> dict:
    if isinstance(model, DecisionTreeModel):
        return {
            "model_type": "decision_tree",
            "version": FORMAT_VERSION,
            "min_leaf": model.min_leaf,
            "max_depth": model.max_depth,
            "root": _node_to_dict(model.root),
        }
    if isinstance(model, NaiveBayesModel):
        return {
            "model_type": "naive_bayes",
            "version": FORMAT_VERSION,
            "priors": list(model.priors),
            "means": [list(m) for m in model.means],
            "variances": [list(v) for v in model.variances],
            "var_floor": model.var_floor,
        }
    if isinstance(model, SvmModel):
        return {
            "model_type": "svm_rbf",
            "version": FORMAT_VERSION,
            "gamma": model.gamma,
            "c": model.c,
            "bias": model.bias,
            "sweeps": model.sweeps,
            "support_vectors": [list(map(float, row)) for row in model.support_vectors],
            "dual_coef": [float(x) for x in model.dual_coef],
        }
    raise InputError(f"cannot serialize model of type {type(model).__name__}")


def model_from_dict(data: dict):
    kind = data.get("model_type")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported model version {version!r}")
    if kind == "decision_tree":
        return DecisionTreeModel(
            root=_node_from_dict(data["root"]),
            min_leaf=int(data["min_leaf"]),
            max_depth=int(data["max_depth"]),
        )
    if kind == "naive_bayes":
        return NaiveBayesModel(
            priors=tuple(float(p) for p in data["priors"]),
            means=tuple(tuple(float(x) for x in m) for m in data["means"]),
            variances=tuple(tuple(float(x) for x in v) for v in data["variances"]),
            var_floor=float(data["var_floor"]),
        )
    if kind == "svm_rbf":
        sv = np.asarray(data["support_vectors"], dtype=np.float64)
        if sv.size == 0:
            sv = sv.reshape(0, 5)
        return SvmModel(
            support_vectors=sv,
            dual_coef=np.asarray(data["dual_coef"], dtype=np.float64),
            bias=float(data["bias"]),
            gamma=float(data["gamma"]),
            c=float(data["c"]),
            sweeps=int(data["sweeps"]),
        )
    raise InputError(f"unknown model type {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid model JSON: {exc}") from exc
    return model_from_dict(data)
