# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_kernels_py`` operation for operation."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

IMPLEMENTATION = "cython"


def gv_greedy(int q, int k, int d, int64_t[:, ::1] add_table, int64_t[:, ::1] mul_table,
              double[:, ::1] tail, double tie_tol):
    """Greedy generator construction by conditional expectations.

    ``tail[r, w]`` is the probability that a message holding weight ``w``
    ends below the distance target after ``r`` more uniform columns.
    Returns ``(generator, weights)``; ``weights[u]`` is the final codeword
    weight of message index ``u`` (lexicographic, most significant first).
    """
    cdef Py_ssize_t n_msg = 1
    cdef int t
    for t in range(k):
        n_msg *= q
    cdef int64_t[:, ::1] digits = np.zeros((n_msg, k), dtype=np.int64)
    cdef int64_t[::1] last = np.full(n_msg, -1, dtype=np.int64)
    cdef int64_t[::1] weight = np.zeros(n_msg, dtype=np.int64)
    cdef int64_t[::1] partial = np.zeros(n_msg, dtype=np.int64)
    cdef int64_t[::1] n1 = np.zeros(d + 2, dtype=np.int64)
    cdef int64_t[:, ::1] gen = np.zeros((k, d), dtype=np.int64)
    cdef Py_ssize_t u, rem
    cdef int c, i, a, w, r, best_a, sym
    cdef double score, best, delta

    for u in range(n_msg):
        rem = u
        for t in range(k - 1, -1, -1):
            digits[u, t] = rem % q
            rem //= q
            if digits[u, t] != 0 and last[u] < t:
                last[u] = t

    for c in range(d):
        r = d - c - 1
        for u in range(n_msg):
            partial[u] = 0
        for i in range(k):
            best_a = 0
            best = 0.0
            for a in range(q):
                for w in range(d + 2):
                    n1[w] = 0
                for u in range(n_msg):
                    if last[u] == i:
                        sym = add_table[partial[u], mul_table[digits[u, i], a]]
                        if sym != 0:
                            n1[weight[u]] += 1
                score = 0.0
                for w in range(d + 1):
                    delta = tail[r, w + 1] - tail[r, w]
                    score += <double>n1[w] * delta
                if a == 0 or score < best - tie_tol * max(1.0, fabs(best)):
                    best = score
                    best_a = a
            gen[i, c] = best_a
            for u in range(n_msg):
                if digits[u, i] != 0:
                    partial[u] = add_table[partial[u], mul_table[digits[u, i], best_a]]
        for u in range(n_msg):
            if partial[u] != 0:
                weight[u] += 1
    return np.asarray(gen), np.asarray(weight)


def max_covered(uint64_t[:, ::1] bits, int64_t[::1] weights, int s, double frac, int64_t stop_at):
    """Worst s-subset S of columns for the covering count.

    For each S, counts columns ``j`` outside S whose support meets the union
    of S's supports in at least ``frac * weights[j]`` positions. Returns
    ``(count, S)`` for the first S attaining the maximum, stopping early once
    a count reaches ``stop_at`` (pass a negative value to disable).
    """
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t nw = bits.shape[1]
    cdef Py_ssize_t j, t, w
    cdef int64_t count, best = -1, ov
    cdef uint64_t[::1] union = np.zeros(nw, dtype=np.uint64)
    cdef int64_t[::1] idx = np.arange(s, dtype=np.int64)
    cdef cnp.uint8_t[::1] in_s = np.zeros(n, dtype=np.uint8)
    cdef double[::1] need = np.empty(n, dtype=np.float64)
    best_s = ()
    if s > n:
        return 0, ()
    for j in range(n):
        need[j] = frac * <double>weights[j]
    while True:
        for w in range(nw):
            union[w] = 0
        for t in range(s):
            in_s[idx[t]] = 1
            for w in range(nw):
                union[w] |= bits[idx[t], w]
        count = 0
        for j in range(n):
            if in_s[j]:
                continue
            ov = 0
            for w in range(nw):
                ov += __builtin_popcountll(bits[j, w] & union[w])
            if <double>ov >= need[j]:
                count += 1
        for t in range(s):
            in_s[idx[t]] = 0
        if count > best:
            best = count
            best_s = tuple(int(idx[t]) for t in range(s))
            if stop_at >= 0 and best >= stop_at:
                break
        # next combination in lexicographic order
        t = s - 1
        while t >= 0 and idx[t] == n - s + t:
            t -= 1
        if t < 0:
            break
        idx[t] += 1
        for w in range(t + 1, s):
            idx[w] = idx[w - 1] + 1
    return int(best), best_s
