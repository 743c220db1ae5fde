"""NumPy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and same floating-point evaluation order, so both
implementations return identical results.
"""
from __future__ import annotations

import itertools

import numpy as np

IMPLEMENTATION = "python"


def _message_digits(q, k):
    n_msg = q**k
    u = np.arange(n_msg, dtype=np.int64)
    digits = np.empty((n_msg, k), dtype=np.int64)
    for t in range(k - 1, -1, -1):
        digits[:, t] = u % q
        u = u // q
    return digits


def gv_greedy(q, k, d, add_table, mul_table, tail, tie_tol):
    digits = _message_digits(q, k)
    n_msg = digits.shape[0]
    nz = digits != 0
    last = np.where(nz.any(axis=1), k - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
    weight = np.zeros(n_msg, dtype=np.int64)
    gen = np.zeros((k, d), dtype=np.int64)
    groups = [np.flatnonzero(last == i) for i in range(k)]

    for c in range(d):
        r = d - c - 1
        delta = [float(tail[r, w + 1] - tail[r, w]) for w in range(d + 1)]
        partial = np.zeros(n_msg, dtype=np.int64)
        for i in range(k):
            grp = groups[i]
            p_grp, u_i, w_grp = partial[grp], digits[grp, i], weight[grp]
            best_a, best = 0, 0.0
            for a in range(q):
                sym = add_table[p_grp, mul_table[u_i, a]]
                n1 = np.bincount(w_grp[sym != 0], minlength=d + 2)
                score = 0.0
                for w in range(d + 1):
                    score += float(n1[w]) * delta[w]
                if a == 0 or score < best - tie_tol * max(1.0, abs(best)):
                    best, best_a = score, a
            gen[i, c] = best_a
            partial = add_table[partial, mul_table[digits[:, i], best_a]]
        weight += partial != 0
    return gen, weight


def max_covered(bits, weights, s, frac, stop_at):
    n = bits.shape[0]
    if s > n:
        return 0, ()
    # unpack uint64 words into a dense 0/1 column-by-row matrix
    cols = np.unpackbits(bits.view(np.uint8), axis=1, bitorder="little").astype(np.int64)
    need = frac * weights.astype(np.float64)
    best, best_s = -1, ()
    for S in itertools.combinations(range(n), s):
        union = cols[list(S)].any(axis=0) if s else np.zeros(cols.shape[1], dtype=bool)
        ov = cols @ union.astype(np.int64)
        hit = ov.astype(np.float64) >= need
        hit[list(S)] = False
        count = int(hit.sum())
        if count > best:
            best, best_s = count, tuple(S)
            if stop_at >= 0 and best >= stop_at:
                break
    return best, best_s
