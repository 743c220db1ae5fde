"""Kernel selection: the compiled extension when built, else the NumPy fallback.

Set ``OBCS_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if os.environ.get("OBCS_PURE_PYTHON") != "1":
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

_active = compiled_kernels if compiled_kernels is not None else python_kernels

IMPLEMENTATION = _active.IMPLEMENTATION
gv_greedy = _active.gv_greedy
max_covered = _active.max_covered


def backends():
    """Available kernel modules keyed by implementation name."""
    out = {"python": python_kernels}
    if compiled_kernels is not None:
        out["cython"] = compiled_kernels
    return out
