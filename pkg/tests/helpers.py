"""Shared test oracles and builders.

Everything here is deliberately independent of the package internals:
the graph oracle works from the public edge list with plain set
algebra, and the rank-statistic AUROC never touches the ROC code.
"""

from __future__ import annotations

import itertools
import random

from mcclink.features import FeatureRow, FeatureTable
from mcclink.graph import SocialGraph


def adjacency_from_edges(edges):
    adj: dict[object, set] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def brute_mcc(edges):
    """Mutual-friend count, links among them, and the coefficient for
    every edge, computed with plain set intersections.

    Returns {frozenset({u, v}): (m, l, mcc)}.
    """
    adj = adjacency_from_edges(edges)
    out = {}
    for u, v in edges:
        mutual = (adj[u] & adj[v]) - {u, v}
        links = sum(
            1 for a, b in itertools.combinations(sorted(mutual, key=repr), 2)
            if b in adj[a]
        )
        m = len(mutual)
        mcc = (2.0 * links) / (m * (m - 1)) if m >= 2 else 0.0
        out[frozenset((u, v))] = (m, links, mcc)
    return out


def random_graph(rng: random.Random, max_nodes: int = 12) -> SocialGraph:
    """Random graph with random density; at least one edge."""
    n = rng.randint(2, max_nodes)
    ids = [f"n{i}" for i in range(n)]
    p = rng.uniform(0.05, 0.95)
    edges = [
        (ids[i], ids[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    if not edges:
        edges = [(ids[0], ids[1])]
    rng.shuffle(edges)
    return SocialGraph(ids, edges)


def complete_graph(n: int) -> SocialGraph:
    ids = [f"k{i}" for i in range(n)]
    return SocialGraph(ids, itertools.combinations(ids, 2))


def rank_auroc(scores, truth) -> float:
    """Tie-corrected Mann-Whitney statistic: the probability that a
    random positive outranks a random negative, ties counting half."""
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    pos = [r for r, t in zip(ranks, truth) if t == 1]
    n1 = len(pos)
    n0 = len(truth) - n1
    if n0 == 0 or n1 == 0:
        raise ValueError("need both classes")
    return (sum(pos) - n1 * (n1 + 1) / 2.0) / (n0 * n1)


def recount_roc(scores, truth):
    """ROC points by direct recount: one threshold per distinct score,
    descending, predicting suspicious at score >= threshold."""
    pos = sum(truth)
    neg = len(truth) - pos
    points = [(0.0, 0.0)]
    for thr in sorted(set(scores), reverse=True):
        tp = sum(1 for s, t in zip(scores, truth) if s >= thr and t == 1)
        fp = sum(1 for s, t in zip(scores, truth) if s >= thr and t == 0)
        points.append((fp / neg, tp / pos))
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return points


def make_table(values, labels, categories=None) -> FeatureTable:
    """FeatureTable from raw 5-wide value rows and 0/1 labels."""
    rows = []
    for i, (vals, label) in enumerate(zip(values, labels)):
        cat = categories[i] if categories else ("suspicious" if label else "normal")
        rows.append(
            FeatureRow(
                u=f"u{i}", v=f"v{i}",
                mcc=float(vals[0]), w=float(vals[1]), e=float(vals[2]),
                ht=float(vals[3]), cc=float(vals[4]),
                label=int(label), category=cat,
            )
        )
    return FeatureTable(rows=tuple(rows))


def random_table(rng: random.Random, n: int, skew: float = 0.6) -> FeatureTable:
    """Random table with both classes present and mildly class-shifted
    features so classifiers have something to learn."""
    values = []
    labels = []
    for i in range(n):
        label = 1 if rng.random() > skew else 0
        shift = 0.25 if label else 0.0
        values.append([min(1.0, max(0.0, rng.random() * 0.75 + shift)) for _ in range(5)])
        labels.append(label)
    labels[0] = 0
    labels[1] = 1
    return make_table(values, labels)


def separated_table(rng: random.Random, n: int, gap: float = 0.3) -> FeatureTable:
    """Two well-separated clusters in [0,1]^5; linearly separable with a
    wide margin, so SVM training has a clean unique-optimum regime."""
    values = []
    labels = []
    for i in range(n):
        label = i % 2
        base = 0.8 if label else 0.2
        values.append([
            min(1.0, max(0.0, base + rng.uniform(-(0.5 - gap / 2), 0.5 - gap / 2) * 0.4))
            for _ in range(5)
        ])
        labels.append(label)
    return make_table(values, labels)


def is_subsequence(a: str, b: str) -> bool:
    it = iter(b)
    return all(ch in it for ch in a)
