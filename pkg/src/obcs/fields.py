"""Small finite fields GF(q) as lookup tables.

Elements are the integers ``0..q-1``. For prime ``q`` this is arithmetic
mod ``q``; for a prime power ``p**e`` an element's base-``p`` digits are the
coefficients of a polynomial reduced modulo a fixed irreducible of degree
``e`` (the lexicographically first monic one).
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

__all__ = ["GF", "MAX_PRIME_POWER", "factor_prime_power", "is_prime", "smallest_prime_power_at_least"]

# composite prime powers above this are rejected
MAX_PRIME_POWER = 9


def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def factor_prime_power(q):
    """Return ``(p, e)`` with ``q == p**e``, or None if ``q`` is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


def smallest_prime_power_at_least(x):
    q = max(2, int(np.ceil(x - 1e-12)))
    while factor_prime_power(q) is None:
        q += 1
    return q


def _poly_mulmod(a, b, mod, p):
    # a, b: coefficient lists (low degree first) of length e; mod: monic, length e+1
    e = len(mod) - 1
    prod = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, e - 1, -1):
        c = prod[deg]
        if c:
            for t in range(e + 1):
                prod[deg - e + t] = (prod[deg - e + t] - c * mod[t]) % p
    return prod[:e]


def _is_irreducible(mod, p):
    # no monic divisor of degree 1..e//2
    e = len(mod) - 1
    for deg in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            div = list(low) + [1]
            rem = list(mod)
            for shift in range(e - deg, -1, -1):
                c = rem[shift + deg]
                if c:
                    for t in range(deg + 1):
                        rem[shift + t] = (rem[shift + t] - c * div[t]) % p
            if not any(rem[:deg]):
                return False
    return True


class GF:
    """Finite field of order ``q`` with vectorised table arithmetic.

    >>> F = GF(4)
    >>> int(F.mul(2, 3))
    1
    """

    def __init__(self, q):
        pe = factor_prime_power(q)
        if pe is None:
            raise ValueError(f"q={q} is not a prime power")
        p, e = pe
        if e > 1 and q > MAX_PRIME_POWER:
            raise ValueError(f"prime-power fields are supported only for q <= {MAX_PRIME_POWER}, got q={q}")
        self.q, self.p, self.e = q, p, e
        if e == 1:
            self.modulus = None
            r = np.arange(q)
            self.add_table = (r[:, None] + r[None, :]) % q
            self.mul_table = (r[:, None] * r[None, :]) % q
        else:
            self.modulus = self._find_modulus(p, e)
            digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    s = [(x + y) % p for x, y in zip(digits[a], digits[b])]
                    m = _poly_mulmod(digits[a], digits[b], self.modulus, p)
                    add[a, b] = sum(c * p**i for i, c in enumerate(s))
                    mul[a, b] = sum(c * p**i for i, c in enumerate(m))
            self.add_table, self.mul_table = add, mul
        self.add_table = np.ascontiguousarray(self.add_table, dtype=np.int64)
        self.mul_table = np.ascontiguousarray(self.mul_table, dtype=np.int64)
        self.neg_table = np.array([int(np.flatnonzero(self.add_table[a] == 0)[0]) for a in range(q)])
        self.inv_table = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_table[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])

    @staticmethod
    def _find_modulus(p, e):
        for low in itertools.product(range(p), repeat=e):
            mod = list(reversed(low)) + [1]
            if mod[0] and _is_irreducible(mod, p):
                return tuple(mod)
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self.inv_table[a]

    def matmul(self, A, B):
        """Matrix product over the field (small operands only)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for t in range(A.shape[-1]):
            out = self.add_table[out, self.mul_table[A[..., t, None], B[t]]]
        return out


@lru_cache(maxsize=None)
def get_field(q):
    return GF(q)
