"""Measurement-matrix constructions.

Gaussian and Bernoulli matrices, Robust-UFF families derived from q-ary
codes, random constant-column-weight matrices, and the stacked
group-testing-over-Gaussian matrix used by the superset decoder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import DEFAULT_CODE_CAP, all_codewords, gv_code_construct
from .fields import MAX_PRIME_POWER, factor_prime_power, smallest_prime_power_at_least

__all__ = [
    "RecoveryParams",
    "SetFamily",
    "StackedMatrix",
    "bernoulli_matrix",
    "constant_weight_random",
    "default_m1",
    "default_p",
    "explicit_ruff",
    "gaussian_matrix",
    "gaussian_rows_needed",
    "ruff_from_code",
    "stacked_matrix",
]


def gaussian_matrix(m, n, rng=None):
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m}x{n}")
    return np.random.default_rng(rng).standard_normal((m, n))


def bernoulli_matrix(m, n, p, rng=None):
    """i.i.d. Bernoulli(p) 0/1 matrix (uint8)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Bernoulli probability must lie in [0, 1], got {p}")
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m}x{n}")
    return (np.random.default_rng(rng).random((m, n)) < p).astype(np.uint8)


@dataclass(frozen=True)
class SetFamily:
    """``n_sets`` subsets of ``range(m)``, all of size ``d``."""

    m: int
    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(sorted(int(i) for i in s)) for s in self.sets)
        for s in sets:
            if len(set(s)) != len(s) or (s and not 0 <= s[0] <= s[-1] < self.m):
                raise ValueError(f"set {s} is not a subset of range({self.m})")
        object.__setattr__(self, "sets", sets)

    @property
    def n_sets(self):
        return len(self.sets)

    @property
    def d(self):
        """Common set size, or None when sizes differ."""
        sizes = {len(s) for s in self.sets}
        return sizes.pop() if len(sizes) == 1 else None

    def incidence(self):
        """``m x n_sets`` 0/1 matrix with entry (i, j) = 1 iff i is in set j."""
        B = np.zeros((self.m, self.n_sets), dtype=np.uint8)
        for j, s in enumerate(self.sets):
            B[list(s), j] = 1
        return B

    def truncate(self, n):
        return SetFamily(self.m, self.sets[:n])

    @classmethod
    def from_incidence(cls, B):
        B = np.asarray(B)
        return cls(B.shape[0], tuple(tuple(np.flatnonzero(B[:, j])) for j in range(B.shape[1])))


def ruff_from_code(code, cap=DEFAULT_CODE_CAP):
    """One set per message: codeword position i with symbol c maps to row ``i*q + c``.

    Two sets meet in exactly ``d - dist`` rows, so a code of relative
    distance ``delta`` gives a family with pairwise overlaps at most
    ``(1 - delta) * d``.
    """
    words = all_codewords(code, cap)
    offsets = np.arange(code.d, dtype=np.int64) * code.q
    return SetFamily(code.q * code.d, tuple(tuple(row) for row in (words + offsets)))


_STRICT = 1e-6


def explicit_ruff(n_target, k, alpha, cap=DEFAULT_CODE_CAP):
    """Explicit ``(n_target, q*d, d, k, alpha)`` Robust UFF and its incidence matrix.

    Uses the smallest prime power ``q >= 2k/alpha`` and a GV code of relative
    distance just above ``(k - alpha)/k`` with enough messages to cover ``n_target``;
    the first ``n_target`` messages in lexicographic order are kept.
    """
    if n_target < 1 or k < 1:
        raise ValueError(f"need n_target >= 1 and k >= 1, got n_target={n_target}, k={k}")
    if not 0.0 < alpha <= k:
        raise ValueError(f"alpha must lie in (0, k], got alpha={alpha}")
    q = smallest_prime_power_at_least(2 * k / alpha)
    p, e = factor_prime_power(q)
    if e > 1 and q > MAX_PRIME_POWER:
        raise ValueError(
            f"alpha={alpha}, k={k} needs alphabet q={q}, a prime power above {MAX_PRIME_POWER} that is not prime"
        )
    msg_len = 1
    while q**msg_len < n_target:
        msg_len += 1
    if q**msg_len > cap:
        raise ValueError(
            f"n_target={n_target} needs q**msg_len = {q}**{msg_len} = {q**msg_len} messages, above the cap {cap}"
        )
    # distance exactly (k - alpha)/k only gives overlap <= alpha*d; nudge past it for strict <
    code = gv_code_construct(q, msg_len, (k - alpha) / k + _STRICT, cap=cap)
    family = ruff_from_code(code, cap).truncate(n_target)
    return family, family.incidence()


def constant_weight_random(m, n, k, rng=None):
    """Each column an independent uniform ``floor(m/k)``-subset of rows."""
    d = m // k if k >= 1 else 0
    if d == 0:
        raise ValueError(f"column weight floor(m/k) = floor({m}/{k}) is zero")
    rng = np.random.default_rng(rng)
    B = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        B[rng.choice(m, d, replace=False), j] = 1
    return B


@dataclass(frozen=True)
class RecoveryParams:
    n: int
    k: int
    eps: float
    eta: float = 0.01

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 0.0 < self.eps <= 2.0:
            raise ValueError(f"eps must lie in (0, 2], got {self.eps}")
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")


def gaussian_rows_needed(params):
    """Sufficient Gaussian row count for universal eps-approximate recovery.

    ``ceil((10/eps) * (2k ln((9e n^1.5 + 9e n) / (k eps)) + ln(1/eta)))``.
    """
    n, k, eps, eta = params.n, params.k, params.eps, params.eta
    inner = 2 * k * math.log((9 * math.e * n**1.5 + 9 * math.e * n) / (k * eps)) + math.log(1 / eta)
    return math.ceil(10.0 / eps * inner)


@dataclass(frozen=True)
class StackedMatrix:
    """Binary group-testing block on top of a Gaussian block."""

    top: np.ndarray
    bottom: np.ndarray

    def __post_init__(self):
        if self.top.shape[1] != self.bottom.shape[1]:
            raise ValueError(f"column counts differ: {self.top.shape[1]} vs {self.bottom.shape[1]}")

    @property
    def m1(self):
        return self.top.shape[0]

    @property
    def m2(self):
        return self.bottom.shape[0]

    @property
    def n(self):
        return self.top.shape[1]

    def full(self):
        return np.vstack([self.top.astype(float), self.bottom])


def default_m1(n, k):
    """Group-testing rows ``round(4 k log10 n)``."""
    return max(1, int(round(4 * k * math.log10(n))))


def default_p(k):
    return 1.0 / (k + 1)


def stacked_matrix(n, k, eps=None, eta=0.01, p=None, m1=None, rng=None, m_total=None):
    """Draw ``[Bernoulli(p) block; Gaussian block]``.

    With ``m_total`` the Gaussian block gets the remaining ``m_total - m1``
    rows; otherwise its size comes from :func:`gaussian_rows_needed`.
    """
    m1 = default_m1(n, k) if m1 is None else m1
    p = default_p(k) if p is None else p
    if m1 < 1:
        raise ValueError(f"m1 must be >= 1, got {m1}")
    if m_total is not None:
        if m_total <= m1:
            raise ValueError(f"total rows m={m_total} must exceed m1={m1}")
        m2 = m_total - m1
    else:
        if eps is None:
            raise ValueError("either eps or m_total is required")
        m2 = gaussian_rows_needed(RecoveryParams(n, k, eps, eta))
    rng = np.random.default_rng(rng)
    top = bernoulli_matrix(m1, n, p, rng)
    bottom = gaussian_matrix(m2, n, rng)
    return StackedMatrix(top, bottom)
