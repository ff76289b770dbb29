# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops for modular quality.  Mirrors ``_pykernels`` exactly."""
import numpy as np

from libc.math cimport INFINITY


def greedy_vertex(const double[:, ::1] dist, const double[::1] w, double lam, Py_ssize_t p, init):
    cdef Py_ssize_t n = dist.shape[0]
    cdef double[::1] gain = np.zeros(n)
    cdef unsigned char[::1] taken = np.zeros(n, dtype=np.uint8)
    order = np.empty(p, dtype=np.int64)
    cdef long long[::1] out = order
    cdef Py_ssize_t k = 0, u, best
    cdef double score, best_score
    for item in init:
        u = item
        out[k] = u
        taken[u] = 1
        for t in range(n):
            gain[t] += dist[u, t]
        k += 1
    with nogil:
        while k < p:
            best = -1
            best_score = -INFINITY
            for u in range(n):
                if taken[u]:
                    continue
                score = 0.5 * w[u] + lam * gain[u]
                if score > best_score:
                    best_score = score
                    best = u
            out[k] = best
            taken[best] = 1
            for u in range(n):
                gain[u] += dist[best, u]
            k += 1
    return order, np.asarray(gain)


def best_pair(const double[:, ::1] dist, const double[::1] w, double lam):
    cdef Py_ssize_t n = dist.shape[0], i, j, bi = -1, bj = -1
    cdef double v, best = -INFINITY
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                v = w[i] + w[j] + lam * dist[i, j]
                if v > best:
                    best = v
                    bi = i
                    bj = j
    return bi, bj


def greedy_edge(const double[:, ::1] dist, const double[::1] w, double lam, Py_ssize_t p):
    cdef Py_ssize_t n = dist.shape[0], i, j, bi, bj, r
    cdef Py_ssize_t rounds = p // 2
    cdef double v, best, denom = p - 1
    cdef unsigned char[::1] taken = np.zeros(n, dtype=np.uint8)
    picked = np.empty(2 * rounds, dtype=np.int64)
    cdef long long[::1] out = picked
    with nogil:
        for r in range(rounds):
            best = -INFINITY
            bi = -1
            bj = -1
            for i in range(n):
                if taken[i]:
                    continue
                for j in range(i + 1, n):
                    if taken[j]:
                        continue
                    v = lam * dist[i, j] + (w[i] + w[j]) / denom
                    if v > best:
                        best = v
                        bi = i
                        bj = j
            taken[bi] = 1
            taken[bj] = 1
            out[2 * r] = bi
            out[2 * r + 1] = bj
    return picked


def best_swap(const double[:, ::1] dist, const double[::1] w, double lam,
              const long long[::1] selected, const double[::1] gain):
    """Best ``(delta, out, into)`` over single swaps; scan order is (into, out) ascending."""
    cdef Py_ssize_t n = dist.shape[0], m = selected.shape[0], a, b, u, v
    cdef double delta, best = -INFINITY
    cdef Py_ssize_t bo = -1, bi = -1
    cdef unsigned char[::1] taken = np.zeros(n, dtype=np.uint8)
    sel_sorted = np.sort(np.asarray(selected))
    cdef long long[::1] srt = sel_sorted
    for a in range(m):
        taken[srt[a]] = 1
    with nogil:
        for u in range(n):
            if taken[u]:
                continue
            for b in range(m):
                v = srt[b]
                delta = (w[u] - w[v]) + lam * ((gain[u] - dist[u, v]) - gain[v])
                if delta > best:
                    best = delta
                    bo = v
                    bi = u
    return best, bo, bi


cdef void _enumerate(const double[:, ::1] dist, const double[::1] w, double lam,
                     Py_ssize_t p, Py_ssize_t k, Py_ssize_t start,
                     double[:, ::1] gain, double[::1] val, long long[::1] cur,
                     long long[::1] best_set, double* best) noexcept nogil:
    cdef Py_ssize_t n = dist.shape[0], u, t, j
    cdef double v
    if k == p - 1:
        for u in range(start, n):
            v = val[k] + w[u] + lam * gain[k, u]
            if v > best[0]:
                best[0] = v
                cur[k] = u
                for j in range(p):
                    best_set[j] = cur[j]
        return
    for u in range(start, n - (p - k) + 1):
        cur[k] = u
        val[k + 1] = val[k] + w[u] + lam * gain[k, u]
        for t in range(u + 1, n):
            gain[k + 1, t] = gain[k, t] + dist[u, t]
        _enumerate(dist, w, lam, p, k + 1, u + 1, gain, val, cur, best_set, best)


def brute_force(const double[:, ::1] dist, const double[::1] w, double lam, Py_ssize_t p):
    """Exact maximizer over all p-subsets; ties resolved to the lexicographically first set."""
    cdef Py_ssize_t n = dist.shape[0]
    if p == 0:
        return 0.0, np.empty(0, dtype=np.int64)
    cdef double[:, ::1] gain = np.zeros((p, n))
    cdef double[::1] val = np.zeros(p + 1)
    cdef long long[::1] cur = np.zeros(p, dtype=np.int64)
    result = np.zeros(p, dtype=np.int64)
    cdef long long[::1] best_set = result
    cdef double best = -INFINITY
    with nogil:
        _enumerate(dist, w, lam, p, 0, 0, gain, val, cur, best_set, &best)
    return best, result
