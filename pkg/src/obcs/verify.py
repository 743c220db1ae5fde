"""Brute-force oracles for the combinatorial definitions and numeric checks
for the probabilistic bounds.

Every enumeration is guarded by a cap (default ``10**6`` combinations,
overridable per call or through the ``OBCS_ENUM_CAP`` environment variable).
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrices import SetFamily

__all__ = [
    "DEFAULT_ENUM_CAP",
    "BallSepParams",
    "ListRuffParams",
    "ball_separation_bound",
    "beta_pdf_at_half",
    "check_list_disjunct",
    "check_list_ruff",
    "check_property1",
    "check_ruff",
    "column_bits",
    "compute_TS",
    "enum_cap",
    "fact_arccos_lower",
    "fact_exp_lower",
    "format_report",
    "has_full_support_nullvec",
    "list_ruff_violation",
    "max_TS",
    "mc_ball_separation",
    "nullspace_basis",
    "separation_probability",
]

DEFAULT_ENUM_CAP = 10**6


def enum_cap(cap=None):
    if cap is not None:
        return int(cap)
    env = os.environ.get("OBCS_ENUM_CAP")
    return int(float(env)) if env else DEFAULT_ENUM_CAP


def _check_cap(count, cap, what):
    cap = enum_cap(cap)
    if count > cap:
        raise ValueError(f"{what} needs {count} combinations, above the enumeration cap {cap}")


def format_report(name, passed, observed, threshold):
    """One ``PASS|FAIL name observed threshold`` line."""
    def fmt(v):
        return f"{v:.6g}" if isinstance(v, float) else str(v)

    return f"{'PASS' if passed else 'FAIL'} {name} {fmt(observed)} {fmt(threshold)}"


def column_bits(B):
    """Pack column supports of ``B`` into an ``(n, words)`` uint64 array, plus column weights."""
    nz = np.asarray(B) != 0
    m, n = nz.shape
    words = max(1, -(-m // 64))
    padded = np.zeros((n, words * 64), dtype=bool)
    padded[:, :m] = nz.T
    packed = np.packbits(padded, axis=1, bitorder="little")
    bits = np.ascontiguousarray(packed.view(np.uint64))
    return bits, np.ascontiguousarray(nz.sum(axis=0).astype(np.int64))


# ----------------------------------------------------------------------------
# Combinatorial properties


def check_list_disjunct(M, k, l, cap=None, backend=None):
    """True iff ``M`` is (k, l)-list disjunct.

    For each k-set S the columns whose support lies inside the union of
    S's supports are exactly those no S-free row can isolate; the matrix is
    list disjunct iff there are always fewer than ``l`` of them.
    """
    M = np.asarray(M)
    n = M.shape[1]
    if k < 0 or l < 1:
        raise ValueError(f"need k >= 0 and l >= 1, got k={k}, l={l}")
    if k + l > n:
        return True
    _check_cap(math.comb(n, k), cap, "check_list_disjunct")
    bits, weights = column_bits(M)
    worst, _ = (backend or kernels).max_covered(bits, weights, int(k), 1.0, int(l))
    return worst < l


def _as_incidence(F):
    if isinstance(F, SetFamily):
        return F.incidence()
    return np.asarray(F)


def check_ruff(F, k, alpha, cap=None, backend=None):
    """True iff ``F`` (a SetFamily or its incidence matrix) is a (k, alpha) Robust UFF.

    Requires equal set sizes and ``|B_j0 ∩ (B_j1 ∪ ... ∪ B_jk)| < alpha |B_j0|``
    for all distinct ``j0, ..., jk``.
    """
    B = _as_incidence(F)
    n = B.shape[1]
    bits, weights = column_bits(B)
    if weights.size and np.any(weights != weights[0]):
        return False
    if k >= n:
        return True
    _check_cap(n * math.comb(n - 1, k), cap, "check_ruff")
    worst, _ = (backend or kernels).max_covered(bits, weights, int(k), float(alpha), 1)
    return worst == 0


def check_property1(M, x):
    """True iff every row either misses supp(x) or has a nonzero inner product on it."""
    M = np.asarray(M, dtype=float)
    x = np.asarray(x, dtype=float)
    if M.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {M.shape[1]} columns, signal length {x.shape[0]}")
    supp = x != 0
    hits = (M[:, supp] != 0).any(axis=1)
    sums = M[:, supp] @ x[supp]
    return bool(np.all(~hits | (sums != 0)))


def compute_TS(B, S):
    """Columns outside ``S`` with at least half their support inside the union over ``S``."""
    nz = np.asarray(B) != 0
    S = sorted(set(int(i) for i in S))
    union = nz[:, S].any(axis=1) if S else np.zeros(nz.shape[0], dtype=bool)
    overlap = (nz & union[:, None]).sum(axis=0)
    hit = 2 * overlap >= nz.sum(axis=0)
    hit[S] = False
    return tuple(int(j) for j in np.flatnonzero(hit))


def max_TS(B, k, cap=None, backend=None):
    """Largest ``|T_S|`` over all ``|S| <= k``, with a witnessing S."""
    bits, weights = column_bits(B)
    n = bits.shape[0]
    k = min(k, n)
    _check_cap(sum(math.comb(n, s) for s in range(k + 1)), cap, "max_TS")
    impl = backend or kernels
    best, best_s = -1, ()
    for s in range(k + 1):
        count, S = impl.max_covered(bits, weights, s, 0.5, -1)
        if count > best:
            best, best_s = count, S
    return best, best_s


# ----------------------------------------------------------------------------
# Nullspace machinery for list Robust UFFs


def nullspace_basis(A, rank_tol=1e-9):
    """Columns spanning the nullspace of ``A``, via reduced row echelon form."""
    R = np.array(A, dtype=float, ndmin=2)
    rows, cols = R.shape
    pivots = []
    r = 0
    scale = max(1.0, float(np.abs(R).max())) if R.size else 1.0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= rank_tol * scale:
            R[r:, c] = 0.0
            continue
        R[[r, p]] = R[[p, r]]
        R[r] /= R[r, c]
        others = np.arange(rows) != r
        R[others] -= np.outer(R[others, c], R[r])
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)))
    for t, f in enumerate(free):
        basis[f, t] = 1.0
        for i, pc in enumerate(pivots):
            basis[pc, t] = -R[i, f]
    basis[np.abs(basis) <= rank_tol] = 0.0
    return basis


def has_full_support_nullvec(A, rank_tol=1e-9):
    """True iff some vector with no zero entry satisfies ``A x = 0``.

    A generic combination of a nullspace basis is nonzero at every coordinate
    where some basis vector is nonzero, so it suffices to check coverage.
    """
    basis = nullspace_basis(A, rank_tol)
    if basis.shape[1] == 0:
        return False
    return bool(np.all(np.any(basis != 0, axis=1)))


@dataclass(frozen=True)
class ListRuffParams:
    k: int
    ell: int
    alpha: float = 0.5
    rank_tol: float = 1e-9

    def __post_init__(self):
        if self.k < 1 or self.ell < 1:
            raise ValueError(f"need k >= 1 and ell >= 1, got k={self.k}, ell={self.ell}")


def list_ruff_violation(B, params, cap=None):
    """First violated list-RUFF condition as a short string, or None.

    Property 2 is checked on row subsets of ``A_{S,j}`` of size
    ``ceil(alpha * d)``: a full-support nullvector of such a subset is
    exactly a signal on ``S ∪ {j}`` with too many zero observations.
    """
    B = np.asarray(B, dtype=float)
    nz = B != 0
    m, n = B.shape
    weights = nz.sum(axis=0)
    if weights.size and np.any(weights != weights[0]):
        return "columns have unequal weight"
    d = int(weights[0]) if weights.size else 0
    k = min(params.k, n)
    cap = enum_cap(cap)
    _check_cap(sum(math.comb(n, s) for s in range(k + 1)), cap, "check_list_ruff")
    need = math.ceil(params.alpha * d - 1e-12)
    budget = cap
    for s in range(k + 1):
        for S in itertools.combinations(range(n), s):
            T = compute_TS(B, S) if params.alpha == 0.5 else _threshold_set(nz, S, params.alpha)
            if len(T) >= params.ell:
                return f"|T_S| = {len(T)} >= {params.ell} for S = {S}"
            union = nz[:, list(S)].any(axis=1) if S else np.zeros(m, dtype=bool)
            cols = list(S)
            for j in T:
                L = np.flatnonzero(nz[:, j] & union)
                A = B[np.ix_(L, cols + [j])]
                budget -= math.comb(len(L), need)
                if budget < 0:
                    raise ValueError(f"check_list_ruff exceeded the enumeration cap {cap}")
                for R in itertools.combinations(range(len(L)), need):
                    if has_full_support_nullvec(A[list(R)], params.rank_tol):
                        rows = tuple(int(L[i]) for i in R)
                        return f"full-support nullvector on rows {rows} for S = {S}, j = {j}"
    return None


def _threshold_set(nz, S, alpha):
    S = list(S)
    union = nz[:, S].any(axis=1) if S else np.zeros(nz.shape[0], dtype=bool)
    overlap = (nz & union[:, None]).sum(axis=0)
    hit = overlap >= alpha * nz.sum(axis=0)
    hit[S] = False
    return tuple(int(j) for j in np.flatnonzero(hit))


def check_list_ruff(B, params, cap=None):
    return list_ruff_violation(B, params, cap) is None


# ----------------------------------------------------------------------------
# Probabilistic bounds


@dataclass(frozen=True)
class BallSepParams:
    eps: float
    delta_net: float
    n: int
    samples: int

    def __post_init__(self):
        if not 0.0 < self.eps <= 2.0:
            raise ValueError(f"eps must lie in (0, 2], got {self.eps}")
        if self.delta_net < 0:
            raise ValueError(f"delta_net must be >= 0, got {self.delta_net}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")

    @property
    def nonvacuous(self):
        return self.eps > 2 * self.delta_net * math.sqrt(self.n)


def ball_separation_bound(eps, delta_net, n):
    """Lower bound ``(eps - 2 delta sqrt(n)) / pi`` on full separation."""
    return (eps - 2 * delta_net * math.sqrt(n)) / math.pi


def separation_probability(eps):
    """Exact probability that a Gaussian hyperplane separates two unit vectors ``eps`` apart."""
    return math.acos(max(-1.0, 1.0 - eps * eps / 2.0)) / math.pi


_BLOCK = 1 << 16


def _ball_block(seed, size, n, cos_t, sin_t, delta_net):
    h = np.random.default_rng(seed).standard_normal((size, n))
    hx = h[:, 0]
    hy = cos_t * h[:, 0] + sin_t * h[:, 1]
    norm = np.sqrt(np.einsum("ij,ij->i", h, h))
    event = (np.sign(hx) != np.sign(hy)) & (np.abs(hx) >= delta_net * norm) & (np.abs(hy) >= delta_net * norm)
    return int(np.count_nonzero(event))


def mc_ball_separation(params, rng=None, workers=1):
    """Monte-Carlo frequency of a Gaussian hyperplane separating two balls.

    Uses ``x = e1`` and ``y = cos(t) e1 + sin(t) e2`` with ``|x - y| = eps``;
    a draw counts when it separates ``x`` from ``y`` and keeps both at
    distance at least ``delta_net`` from the hyperplane. Samples are split
    into fixed blocks with their own seeds, so the result does not depend on
    ``workers``. Returns ``(estimate, stderr)``.
    """
    rng = np.random.default_rng(rng)
    theta = 2.0 * math.asin(params.eps / 2.0)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    base = int(rng.integers(2**63))
    n_blocks = -(-params.samples // _BLOCK)
    sizes = [min(_BLOCK, params.samples - b * _BLOCK) for b in range(n_blocks)]
    seeds = np.random.SeedSequence(base).spawn(n_blocks)
    args = [(seeds[b], sizes[b], params.n, cos_t, sin_t, params.delta_net) for b in range(n_blocks)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(lambda a: _ball_block(*a), args))
    else:
        counts = [_ball_block(*a) for a in args]
    est = sum(counts) / params.samples
    return est, math.sqrt(est * (1.0 - est) / params.samples)


def beta_pdf_at_half(n):
    """Density of Beta((n-1)/2, (n-1)/2) at 1/2, evaluated in log space."""
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    a = (n - 1) / 2.0
    log_val = (n - 3) * math.log(0.5) + math.lgamma(n - 1) - 2.0 * math.lgamma(a)
    try:
        val = math.exp(log_val)
    except OverflowError:
        raise OverflowError(f"beta_pdf_at_half({n}) overflows") from None
    return val


def fact_exp_lower(x):
    """Elementwise ``1 - x < exp(-x)`` (the inequality is strict away from 0)."""
    x = np.asarray(x, dtype=float)
    return 1.0 - x < np.exp(-x)


def fact_arccos_lower(x):
    """Elementwise ``arccos(x) >= sqrt(2 (1 - x))`` on ``[0, 1]``."""
    x = np.asarray(x, dtype=float)
    return np.arccos(x) >= np.sqrt(2.0 * (1.0 - x))
