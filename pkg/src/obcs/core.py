"""Measurement operators, signal generation and error metrics.

Indices are 0-based throughout: a support is a sorted tuple of column
indices in ``range(n)``.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "MODELS",
    "sign_value",
    "sign_vector",
    "sign_measure",
    "gt_measure",
    "gt_measure_matrix",
    "sign_to_gt",
    "support",
    "gen_signal",
    "l2_error",
]

MODELS = ("real", "nonnegative", "binary")


def sign_value(y, tol=0.0):
    """Three-valued sign: +1, -1 or 0 (``|y| <= tol`` counts as zero)."""
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"sign of non-finite value {y!r}")
    if y > tol:
        return 1
    if y < -tol:
        return -1
    return 0


def sign_vector(v, tol=0.0):
    """Elementwise :func:`sign_value` returning an int8 array."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("sign of non-finite value")
    out = np.zeros(v.shape, dtype=np.int8)
    out[v > tol] = 1
    out[v < -tol] = -1
    return out


def _as_signal(x, n=None):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"dimension mismatch: matrix has {n} columns, signal has length {x.shape[0]}")
    return x


def sign_measure(M, x, tol=0.0):
    """Observation ``sign(M x)`` for a real or binary matrix."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {M.shape}")
    x = _as_signal(x, M.shape[1])
    return sign_vector(M.astype(float, copy=False) @ x, tol)


def gt_measure(row, x):
    """Group-testing outcome: 1 iff the test row hits the support of ``x``."""
    row = np.asarray(row)
    x = np.asarray(x, dtype=float)
    if row.shape != x.shape:
        raise ValueError(f"dimension mismatch: row {row.shape} vs signal {x.shape}")
    return int(np.any((row != 0) & (x != 0)))


def gt_measure_matrix(M, x):
    """Row-wise :func:`gt_measure`, returned as a uint8 vector."""
    M = np.asarray(M)
    x = _as_signal(x, M.shape[1])
    return ((M != 0) @ (x != 0)).astype(bool).astype(np.uint8)


def sign_to_gt(s):
    """Map a sign outcome (scalar or array) to the group-testing bit it implies."""
    if np.ndim(s) == 0:
        if s not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {s!r}")
        return int(s != 0)
    return (np.asarray(s) != 0).astype(np.uint8)


def support(x):
    """Sorted tuple of indices of nonzero entries."""
    return tuple(int(i) for i in np.flatnonzero(np.asarray(x)))


def _random_support(n, k, rng):
    # partial Fisher-Yates: the first k slots are a uniform k-subset
    perm = np.arange(n)
    for i in range(k):
        j = int(rng.integers(i, n))
        perm[i], perm[j] = perm[j], perm[i]
    return np.sort(perm[:k])


def gen_signal(n, k, model="real", rng=None):
    """Draw a unit-norm signal with exactly ``k`` nonzeros.

    The support is uniform over all k-subsets of ``range(n)``. ``model``
    selects the values on the support: ``real`` (standard normals),
    ``nonnegative`` (their absolute values) or ``binary`` (all ``1/sqrt(k)``).
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if model not in MODELS:
        raise ValueError(f"unknown signal model {model!r}; expected one of {MODELS}")
    rng = np.random.default_rng(rng)
    supp = _random_support(n, k, rng)
    x = np.zeros(n)
    if model == "binary":
        x[supp] = 1.0 / math.sqrt(k)
        return x
    vals = rng.standard_normal(k)
    if model == "nonnegative":
        vals = np.abs(vals)
    norm = np.linalg.norm(vals)
    if norm == 0.0:
        raise RuntimeError("drew an all-zero support vector")
    x[supp] = vals / norm
    return x


def l2_error(x, xhat):
    """Distance between the unit-normalised versions of ``x`` and ``xhat``."""
    x = _as_signal(x)
    xhat = _as_signal(xhat, x.shape[0])
    nx, nh = np.linalg.norm(x), np.linalg.norm(xhat)
    if nx == 0.0 or nh == 0.0:
        raise ValueError("l2_error is undefined for the zero vector")
    return float(min(np.linalg.norm(x / nx - xhat / nh), 2.0))
