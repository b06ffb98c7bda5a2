"""Compare the compiled kernels against the pure-Python fallbacks.

Runs the three hot kernels (indel distance batch, MCC counting, SMO
training) through both backends and prints wall-clock times plus the
speedup.  Invoke from a shell:

    python benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import importlib
import os
import random
import string
import sys
import time

import numpy as np


def _load_backend(pure: bool):
    os.environ.pop("MCCLINK_BACKEND", None)
    if pure:
        os.environ["MCCLINK_BACKEND"] = "pure"
    for name in list(sys.modules):
        if name.startswith("mcclink"):
            del sys.modules[name]
    return importlib.import_module("mcclink.backend")


def _indel_workload(rng: random.Random) -> list[tuple[str, str]]:
    alphabet = string.ascii_lowercase + " "
    pairs = []
    for _ in range(2000):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(20, 120)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(20, 120)))
        pairs.append((a, b))
    return pairs


def _graph_workload(rng: random.Random):
    n = 400
    edges = set()
    while len(edges) < 6000:
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    edges = sorted(edges)
    indptr = np.zeros(n + 1, dtype=np.int64)
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    indices = []
    for i, neigh in enumerate(adj):
        neigh.sort()
        indices.extend(neigh)
        indptr[i + 1] = len(indices)
    eu = np.array([a for a, _ in edges], dtype=np.int64)
    ev = np.array([b for _, b in edges], dtype=np.int64)
    return indptr, np.array(indices, dtype=np.int64), eu, ev


def _svm_workload(seed: int):
    rng = np.random.default_rng(seed)
    n = 400
    X = rng.normal(size=(n, 5))
    y = np.where(X[:, 0] + 0.5 * X[:, 1] > 0, 1.0, -1.0)
    X += rng.normal(scale=0.3, size=X.shape)
    sq = (X * X).sum(axis=1)
    K = np.exp(-0.5 * (sq[:, None] + sq[None, :] - 2.0 * X @ X.T))
    return np.ascontiguousarray(K), y


def _bench(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    pairs = _indel_workload(random.Random(7))
    indptr, indices, eu, ev = _graph_workload(random.Random(11))
    K, y = _svm_workload(13)

    results: dict[str, dict[str, float]] = {}
    for pure in (False, True):
        backend = _load_backend(pure)
        name = backend.BACKEND
        results[name] = {
            "indel 2000 pairs": _bench(
                lambda: [backend.indel_distance(a, b) for a, b in pairs],
                args.repeat,
            ),
            "mcc 6000 edges": _bench(
                lambda: backend.mcc_counts(indptr, indices, eu, ev),
                args.repeat,
            ),
            "smo n=400": _bench(
                lambda: backend.smo_solve(K, y, 1.0, 1e-3, 4000, 0),
                args.repeat,
            ),
        }

    names = list(results)
    if len(names) < 2:
        print("only one backend available:", names)
        return
    width = max(len(k) for k in results[names[0]])
    print(f"{'workload':<{width}}  {names[0]:>14}  {names[1]:>14}  speedup")
    for key in results[names[0]]:
        a = results[names[0]][key]
        b = results[names[1]][key]
        ratio = b / a if a > 0 else float("inf")
        print(f"{key:<{width}}  {a:>13.4f}s  {b:>13.4f}s  {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
