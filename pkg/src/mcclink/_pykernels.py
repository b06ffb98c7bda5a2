"""Pure-Python kernels: edit distance, mutual-neighbourhood counts, SMO.

These are the reference implementations of the three hot loops.  The
compiled extension in ``_speedups.pyx`` mirrors them step for step, so
both backends produce identical results.
"""

from __future__ import annotations

import numpy as np

_LCG_A = 6364136223846793005
_LCG_C = 1442695040888963407
_LCG_MASK = (1 << 64) - 1
_LCG_SALT = 0x9E3779B97F4A7C15


def indel_distance(a: str, b: str) -> int:
    """Minimum number of insertions plus deletions turning ``a`` into ``b``.

    Computed as len(a) + len(b) - 2 * LCS(a, b) with a two-row dynamic
    program.  Substitutions are not allowed, only insert and delete.
    """
    # Shared prefix and suffix always belong to a longest common
    # subsequence, so they can be stripped first.
    lo = 0
    hi_a, hi_b = len(a), len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    a = a[lo:hi_a]
    b = b[lo:hi_b]
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return la + lb
    prev = [0] * (lb + 1)
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        ca = a[i - 1]
        cur[0] = 0
        for j in range(1, lb + 1):
            if ca == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                left = cur[j - 1]
                up = prev[j]
                cur[j] = left if left >= up else up
        prev, cur = cur, prev
    return la + lb - 2 * prev[lb]


def mcc_counts(
    indptr: np.ndarray, indices: np.ndarray, eu: np.ndarray, ev: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge mutual-neighbourhood sizes and link counts.

    ``indptr``/``indices`` form a CSR adjacency with each neighbour list
    sorted ascending; ``eu``/``ev`` are endpoint index arrays, one entry
    per edge.  Returns ``(m, l)`` where ``m[t]`` is the number of mutual
    neighbours of edge ``t``'s endpoints (excluding the endpoints) and
    ``l[t]`` the number of edges among those mutual neighbours.
    """
    ne = len(eu)
    m_out = np.zeros(ne, dtype=np.int64)
    l_out = np.zeros(ne, dtype=np.int64)
    for t in range(ne):
        u = int(eu[t])
        v = int(ev[t])
        au, bu = int(indptr[u]), int(indptr[u + 1])
        av, bv = int(indptr[v]), int(indptr[v + 1])
        mutual = []
        i, j = au, av
        while i < bu and j < bv:
            x = indices[i]
            yv = indices[j]
            if x == yv:
                if x != u and x != v:
                    mutual.append(int(x))
                i += 1
                j += 1
            elif x < yv:
                i += 1
            else:
                j += 1
        m = len(mutual)
        m_out[t] = m
        links = 0
        for p in range(m):
            a = mutual[p]
            ia, ib = int(indptr[a]), int(indptr[a + 1])
            # count neighbours of a that are mutual and larger than a,
            # so each linked pair is counted exactly once
            q = p + 1
            k = ia
            while q < m and k < ib:
                w = indices[k]
                mq = mutual[q]
                if w == mq:
                    links += 1
                    q += 1
                    k += 1
                elif w < mq:
                    k += 1
                else:
                    q += 1
        l_out[t] = links
    return m_out, l_out


def smo_solve(
    K: np.ndarray,
    y: np.ndarray,
    C: float,
    tol: float,
    max_passes: int,
    seed: int,
) -> tuple[np.ndarray, float, int, bool]:
    """Sequential minimal optimization over a precomputed kernel matrix.

    ``K`` is the n-by-n Gram matrix, ``y`` holds labels in {-1, +1}.
    Pair selection uses the second-choice heuristic (maximise |E_i - E_j|
    over non-bound points) with seeded scan-start fallbacks.  A full
    error cache is kept and updated incrementally.  Returns
    ``(alpha, b, sweeps, converged)`` where a sweep is one pass of the
    outer loop and convergence means a full sweep changed nothing.
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.shape[0]
    alpha = np.zeros(n, dtype=np.float64)
    E = -y.copy()
    b = 0.0
    state = (int(seed) ^ _LCG_SALT) & _LCG_MASK

    def draw(bound: int) -> int:
        nonlocal state
        state = (state * _LCG_A + _LCG_C) & _LCG_MASK
        return (state >> 33) % bound

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b, E
        if i1 == i2:
            return False
        a1 = float(alpha[i1])
        a2 = float(alpha[i2])
        y1 = float(y[i1])
        y2 = float(y[i2])
        e1 = float(E[i1])
        e2 = float(E[i2])
        s = y1 * y2
        if s > 0.0:
            lo = a1 + a2 - C
            if lo < 0.0:
                lo = 0.0
            hi = a1 + a2
            if hi > C:
                hi = C
        else:
            lo = a2 - a1
            if lo < 0.0:
                lo = 0.0
            hi = C + a2 - a1
            if hi > C:
                hi = C
        if lo >= hi:
            return False
        k11 = float(K[i1, i1])
        k12 = float(K[i1, i2])
        k22 = float(K[i2, i2])
        eta = k11 + k22 - 2.0 * k12
        if eta <= 0.0:
            return False
        a2new = a2 + y2 * (e1 - e2) / eta
        if a2new < lo:
            a2new = lo
        elif a2new > hi:
            a2new = hi
        if abs(a2new - a2) < 1e-3 * (a2new + a2 + 1e-3):
            return False
        a1new = a1 + s * (a2 - a2new)
        t1 = y1 * (a1new - a1)
        t2 = y2 * (a2new - a2)
        b1 = b - e1 - t1 * k11 - t2 * k12
        b2 = b - e2 - t1 * k12 - t2 * k22
        if 0.0 < a1new < C:
            bnew = b1
        elif 0.0 < a2new < C:
            bnew = b2
        else:
            bnew = 0.5 * (b1 + b2)
        db = bnew - b
        E += t1 * K[i1] + t2 * K[i2] + db
        alpha[i1] = a1new
        alpha[i2] = a2new
        b = bnew
        return True

    def examine(i2: int) -> int:
        y2 = float(y[i2])
        a2 = float(alpha[i2])
        e2 = float(E[i2])
        r2 = e2 * y2
        if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0.0)):
            return 0
        nb = [i for i in range(n) if 0.0 < alpha[i] < C]
        if len(nb) > 1:
            best = -1
            gap = -1.0
            for i in nb:
                d = abs(float(E[i]) - e2)
                if d > gap:
                    gap = d
                    best = i
            if take_step(best, i2):
                return 1
        if nb:
            start = draw(len(nb))
            for k in range(len(nb)):
                if take_step(nb[(start + k) % len(nb)], i2):
                    return 1
        start = draw(n)
        for k in range(n):
            if take_step((start + k) % n, i2):
                return 1
        return 0

    sweeps = 0
    examine_all = True
    while sweeps < max_passes:
        sweeps += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += examine(i)
        else:
            for i in range(n):
                if 0.0 < alpha[i] < C:
                    changed += examine(i)
        if examine_all:
            if changed == 0:
                return alpha, b, sweeps, True
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alpha, b, sweeps, False
