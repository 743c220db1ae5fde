"""Plain-text file formats.

Matrices: a header ``kind m n`` (kind is ``binary`` or ``real``) followed by
``m`` lines of ``n`` space-separated values; binary entries are ``0``/``1``
and reals use the shortest round-trip decimal. Vectors (signals, sign
observations): one value per line.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = [
    "dumps_matrix",
    "dumps_vector",
    "loads_matrix",
    "loads_vector",
    "read_matrix",
    "read_vector",
    "write_matrix",
    "write_vector",
]

KINDS = ("binary", "real")


def _fmt_real(v):
    return repr(float(v))


def dumps_matrix(M, kind=None):
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {M.shape}")
    if kind is None:
        kind = "binary" if np.isin(M, (0, 1)).all() and M.dtype.kind in "biu" else "real"
    if kind not in KINDS:
        raise ValueError(f"unknown matrix kind {kind!r}")
    lines = [f"{kind} {M.shape[0]} {M.shape[1]}"]
    if kind == "binary":
        if not np.isin(M, (0, 1)).all():
            raise ValueError("binary matrix has entries other than 0/1")
        lines += [" ".join("1" if v else "0" for v in row) for row in M]
    else:
        if not np.all(np.isfinite(M)):
            raise ValueError("real matrix has non-finite entries")
        lines += [" ".join(_fmt_real(v) for v in row) for row in M]
    return "\n".join(lines) + "\n"


def loads_matrix(text):
    """Parse a matrix; returns ``(kind, array)`` (uint8 for binary, float64 for real)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3 or head[0] not in KINDS:
        raise ValueError(f"bad matrix header {lines[0]!r}; expected 'binary|real m n'")
    kind, m, n = head[0], int(head[1]), int(head[2])
    if len(lines) - 1 != m:
        raise ValueError(f"header promises {m} rows, file has {len(lines) - 1}")
    rows = [ln.split() for ln in lines[1:]]
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ValueError(f"row {i} has {len(r)} entries, expected {n}")
    if kind == "binary":
        M = np.array([[int(v) for v in r] for r in rows], dtype=np.uint8).reshape(m, n)
        if not np.isin(M, (0, 1)).all():
            raise ValueError("binary matrix has entries other than 0/1")
    else:
        M = np.array([[float(v) for v in r] for r in rows], dtype=float).reshape(m, n)
    return kind, M


def write_matrix(path, M, kind=None):
    Path(path).write_text(dumps_matrix(M, kind))


def read_matrix(path):
    return loads_matrix(Path(path).read_text())


def dumps_vector(v):
    v = np.asarray(v)
    if v.dtype.kind in "biu":
        return "".join(f"{int(a)}\n" for a in v)
    return "".join(f"{_fmt_real(a)}\n" for a in v)


def loads_vector(text, dtype=float):
    vals = [ln.strip() for ln in text.splitlines() if ln.strip()]
    return np.array([float(v) for v in vals], dtype=dtype)


def write_vector(path, v):
    Path(path).write_text(dumps_vector(v))


def read_vector(path, dtype=float):
    return loads_vector(Path(path).read_text(), dtype)
