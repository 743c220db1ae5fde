"""Decoders: group-testing elimination, Robust-UFF thresholding, BIHT and
the superset pipeline that chains the first and the last."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import sign_to_gt, sign_vector

__all__ = [
    "BihtConfig",
    "DecodeError",
    "binary_round",
    "biht",
    "gt_superset_decode",
    "ruff_decode",
    "superset_recover",
    "top_k",
]


class DecodeError(RuntimeError):
    """The observations do not determine an answer (e.g. an all-zero estimate)."""


@dataclass(frozen=True)
class BihtConfig:
    max_iters: int = 1000
    step_size: float = 1.0
    consistency_stop: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.step_size > 0:
            raise ValueError(f"step_size must be positive, got {self.step_size}")


def top_k(v, k):
    """Keep the ``k`` largest-magnitude entries of ``v``; ties go to lower indices."""
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    if k <= 0:
        return out
    keep = np.argsort(-np.abs(v), kind="stable")[:k]
    out[keep] = v[keep]
    return out


def gt_superset_decode(M, y):
    """Indices never appearing in a negative test, as a sorted tuple."""
    M = np.asarray(M)
    y = np.asarray(y)
    if y.shape != (M.shape[0],):
        raise ValueError(f"dimension mismatch: {M.shape[0]} tests, {y.shape} outcomes")
    eliminated = np.any(M[y == 0] != 0, axis=0)
    return tuple(int(j) for j in np.flatnonzero(~eliminated))


def ruff_decode(B, b):
    """Keep column j when more than half of its support sees a nonzero sign.

    Accumulates every qualifying column.
    """
    B = np.asarray(B) != 0
    b = np.asarray(b)
    if b.shape != (B.shape[0],):
        raise ValueError(f"dimension mismatch: {B.shape[0]} rows, {b.shape} observations")
    weights = B.sum(axis=0)
    if weights.size and np.any(weights != weights[0]):
        raise ValueError("ruff_decode needs constant column weight")
    d = int(weights[0]) if weights.size else 0
    hits = B.T.astype(np.int64) @ (b != 0).astype(np.int64)
    return tuple(int(j) for j in np.flatnonzero(2 * hits > d))


def biht(A, y, k, cfg=None, full_output=False):
    """Binary iterative hard thresholding.

    Iterates ``x <- top_k(x + (step/m) A^T (y - sign(A x)))`` from zero
    until the signs agree with ``y`` or ``cfg.max_iters`` is reached, and
    returns the unit-normalised iterate. With ``full_output`` also returns
    the number of iterations taken.
    """
    cfg = cfg or BihtConfig()
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    m, n = A.shape
    if y.shape != (m,):
        raise ValueError(f"dimension mismatch: {m} rows, {y.shape} observations")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = min(k, n)
    scale = cfg.step_size / m
    x = np.zeros(n)
    s = np.zeros(m)
    it = 0
    for it in range(1, cfg.max_iters + 1):
        x = top_k(x + scale * (A.T @ (y - s)), k)
        supp = np.flatnonzero(x)
        s = sign_vector(A[:, supp] @ x[supp]).astype(float)
        if cfg.consistency_stop and np.array_equal(s, y):
            break
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise DecodeError("BIHT ended at the zero vector")
    x = x / norm
    return (x, it) if full_output else x


def superset_recover(SM, y1, y2, k, cfg=None, on_all_zero="error", full_output=False):
    """Group-testing superset from ``y1``, then BIHT inside it from ``y2``.

    ``on_all_zero`` picks the behaviour when every group test is negative:
    ``"error"`` raises :class:`DecodeError`, ``"full"`` runs BIHT on all
    columns. With ``full_output`` returns ``(x, superset)``.
    """
    if on_all_zero not in ("error", "full"):
        raise ValueError(f"on_all_zero must be 'error' or 'full', got {on_all_zero!r}")
    bits = sign_to_gt(np.asarray(y1))
    y2 = np.asarray(y2)
    if y2.shape != (SM.m2,):
        raise ValueError(f"dimension mismatch: {SM.m2} Gaussian rows, {y2.shape} observations")
    if not np.any(bits):
        if on_all_zero == "error":
            raise DecodeError("every group test came back negative")
        x = biht(SM.bottom, y2, k, cfg)
        return (x, tuple(range(SM.n))) if full_output else x
    S = gt_superset_decode(SM.top, bits)
    if not S:
        raise DecodeError("group-testing decode eliminated every column")
    idx = np.asarray(S)
    x = np.zeros(SM.n)
    x[idx] = biht(SM.bottom[:, idx], y2, min(k, len(S)), cfg)
    return (x, S) if full_output else x


def binary_round(xhat, k):
    """Nearest unit-norm binary signal: ``1/sqrt(k)`` on the ``k`` largest magnitudes."""
    xhat = np.asarray(xhat, dtype=float)
    out = np.zeros_like(xhat)
    keep = np.argsort(-np.abs(xhat), kind="stable")[:k]
    out[keep] = 1.0 / math.sqrt(k)
    return out
