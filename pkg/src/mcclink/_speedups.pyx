# cython: language_level=3
"""Compiled kernels: edit distance, mutual-neighbourhood counts, SMO.

Mirrors _pykernels step for step (same update order, same tie-breaking,
same linear-congruential fallback scans) so both backends agree.
"""

import numpy as np

from libc.math cimport fabs

cdef unsigned long long _LCG_A = 6364136223846793005ULL
cdef unsigned long long _LCG_C = 1442695040888963407ULL
cdef unsigned long long _LCG_SALT = 0x9E3779B97F4A7C15ULL


def indel_distance(str a, str b):
    """Minimum insertions plus deletions turning ``a`` into ``b``."""
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi_a = len(a)
    cdef Py_ssize_t hi_b = len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    cdef Py_ssize_t la = hi_a - lo
    cdef Py_ssize_t lb = hi_b - lo
    if la == 0 or lb == 0:
        return la + lb
    xa_arr = np.frombuffer(a[lo:hi_a].encode("utf-32-le"), dtype=np.uint32)
    xb_arr = np.frombuffer(b[lo:hi_b].encode("utf-32-le"), dtype=np.uint32)
    cdef const unsigned int[::1] xa = xa_arr
    cdef const unsigned int[::1] xb = xb_arr
    prev_arr = np.zeros(lb + 1, dtype=np.int64)
    cur_arr = np.zeros(lb + 1, dtype=np.int64)
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] cur = cur_arr
    cdef long long[::1] tmp
    cdef Py_ssize_t i, j
    cdef unsigned int ca
    cdef long long left, up
    for i in range(1, la + 1):
        ca = xa[i - 1]
        cur[0] = 0
        for j in range(1, lb + 1):
            if ca == xb[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                left = cur[j - 1]
                up = prev[j]
                cur[j] = left if left >= up else up
        tmp = prev
        prev = cur
        cur = tmp
    return la + lb - 2 * prev[lb]


def mcc_counts(indptr_in, indices_in, eu_in, ev_in):
    """Per-edge mutual-neighbour and mutual-link counts over a CSR
    adjacency with sorted neighbour lists."""
    indptr_arr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    indices_arr = np.ascontiguousarray(indices_in, dtype=np.int64)
    eu_arr = np.ascontiguousarray(eu_in, dtype=np.int64)
    ev_arr = np.ascontiguousarray(ev_in, dtype=np.int64)
    cdef const long long[::1] indptr = indptr_arr
    cdef const long long[::1] indices = indices_arr
    cdef const long long[::1] eu = eu_arr
    cdef const long long[::1] ev = ev_arr
    cdef Py_ssize_t ne = eu.shape[0]
    m_out_arr = np.zeros(ne, dtype=np.int64)
    l_out_arr = np.zeros(ne, dtype=np.int64)
    cdef long long[::1] m_out = m_out_arr
    cdef long long[::1] l_out = l_out_arr
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef Py_ssize_t max_deg = 0
    cdef Py_ssize_t d, t
    for t in range(nv):
        d = indptr[t + 1] - indptr[t]
        if d > max_deg:
            max_deg = d
    mutual_arr = np.zeros(max_deg if max_deg > 0 else 1, dtype=np.int64)
    cdef long long[::1] mutual = mutual_arr
    cdef long long u, v, x, yv, w, mq, links
    cdef Py_ssize_t au, bu, av, bv, i, j, m, p, q, k, ia, ib
    for t in range(ne):
        u = eu[t]
        v = ev[t]
        au = indptr[u]
        bu = indptr[u + 1]
        av = indptr[v]
        bv = indptr[v + 1]
        m = 0
        i = au
        j = av
        while i < bu and j < bv:
            x = indices[i]
            yv = indices[j]
            if x == yv:
                if x != u and x != v:
                    mutual[m] = x
                    m += 1
                i += 1
                j += 1
            elif x < yv:
                i += 1
            else:
                j += 1
        m_out[t] = m
        links = 0
        for p in range(m):
            ia = indptr[mutual[p]]
            ib = indptr[mutual[p] + 1]
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
    return m_out_arr, l_out_arr


cdef inline Py_ssize_t _draw(unsigned long long* state, Py_ssize_t bound) nogil:
    state[0] = state[0] * _LCG_A + _LCG_C
    return <Py_ssize_t>((state[0] >> 33) % (<unsigned long long>bound))


cdef bint _take_step(
    const double[:, ::1] K,
    const double[::1] y,
    double[::1] alpha,
    double[::1] E,
    double C,
    Py_ssize_t n,
    Py_ssize_t i1,
    Py_ssize_t i2,
    double* b,
) nogil:
    cdef double a1, a2, y1, y2, e1, e2, s, lo, hi
    cdef double k11, k12, k22, eta, a1new, a2new
    cdef double t1, t2, b1, b2, bnew, db
    cdef Py_ssize_t k
    if i1 == i2:
        return False
    a1 = alpha[i1]
    a2 = alpha[i2]
    y1 = y[i1]
    y2 = y[i2]
    e1 = E[i1]
    e2 = E[i2]
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
    k11 = K[i1, i1]
    k12 = K[i1, i2]
    k22 = K[i2, i2]
    eta = k11 + k22 - 2.0 * k12
    if eta <= 0.0:
        return False
    a2new = a2 + y2 * (e1 - e2) / eta
    if a2new < lo:
        a2new = lo
    elif a2new > hi:
        a2new = hi
    if fabs(a2new - a2) < 1e-3 * (a2new + a2 + 1e-3):
        return False
    a1new = a1 + s * (a2 - a2new)
    t1 = y1 * (a1new - a1)
    t2 = y2 * (a2new - a2)
    b1 = b[0] - e1 - t1 * k11 - t2 * k12
    b2 = b[0] - e2 - t1 * k12 - t2 * k22
    if 0.0 < a1new < C:
        bnew = b1
    elif 0.0 < a2new < C:
        bnew = b2
    else:
        bnew = 0.5 * (b1 + b2)
    db = bnew - b[0]
    for k in range(n):
        E[k] = E[k] + (t1 * K[i1, k] + t2 * K[i2, k] + db)
    alpha[i1] = a1new
    alpha[i2] = a2new
    b[0] = bnew
    return True


cdef int _examine(
    const double[:, ::1] K,
    const double[::1] y,
    double[::1] alpha,
    double[::1] E,
    double C,
    double tol,
    Py_ssize_t n,
    Py_ssize_t i2,
    double* b,
    unsigned long long* state,
    long long[::1] nbbuf,
) nogil:
    cdef double y2 = y[i2]
    cdef double a2 = alpha[i2]
    cdef double e2 = E[i2]
    cdef double r2 = e2 * y2
    cdef Py_ssize_t i, k, nb_count, best, start
    cdef double gap, d
    if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0.0)):
        return 0
    nb_count = 0
    for i in range(n):
        if 0.0 < alpha[i] < C:
            nbbuf[nb_count] = i
            nb_count += 1
    if nb_count > 1:
        best = -1
        gap = -1.0
        for k in range(nb_count):
            i = nbbuf[k]
            d = fabs(E[i] - e2)
            if d > gap:
                gap = d
                best = i
        if _take_step(K, y, alpha, E, C, n, best, i2, b):
            return 1
    if nb_count > 0:
        start = _draw(state, nb_count)
        for k in range(nb_count):
            if _take_step(
                K, y, alpha, E, C, n, nbbuf[(start + k) % nb_count], i2, b
            ):
                return 1
    start = _draw(state, n)
    for k in range(n):
        if _take_step(K, y, alpha, E, C, n, (start + k) % n, i2, b):
            return 1
    return 0


def smo_solve(K_in, y_in, double C, double tol, int max_passes, long long seed):
    """Sequential minimal optimization; see the pure twin for semantics."""
    K_arr = np.ascontiguousarray(K_in, dtype=np.float64)
    y_arr = np.ascontiguousarray(y_in, dtype=np.float64)
    cdef Py_ssize_t n = y_arr.shape[0]
    alpha_arr = np.zeros(n, dtype=np.float64)
    E_arr = np.ascontiguousarray(-y_arr)
    nbbuf_arr = np.zeros(n if n > 0 else 1, dtype=np.int64)
    cdef const double[:, ::1] K = K_arr
    cdef const double[::1] y = y_arr
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] E = E_arr
    cdef long long[::1] nbbuf = nbbuf_arr
    cdef double b = 0.0
    cdef unsigned long long state = (<unsigned long long>seed) ^ _LCG_SALT
    cdef int sweeps = 0
    cdef bint examine_all = True
    cdef Py_ssize_t i
    cdef int changed
    while sweeps < max_passes:
        sweeps += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += _examine(K, y, alpha, E, C, tol, n, i, &b, &state, nbbuf)
        else:
            for i in range(n):
                if 0.0 < alpha[i] < C:
                    changed += _examine(
                        K, y, alpha, E, C, tol, n, i, &b, &state, nbbuf
                    )
        if examine_all:
            if changed == 0:
                return alpha_arr, float(b), sweeps, True
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alpha_arr, float(b), sweeps, False
