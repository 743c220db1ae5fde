"""Superset technique for one-bit compressed sensing."""
from .core import gen_signal, gt_measure, l2_error, sign_measure, sign_to_gt, sign_value
from .kernels import IMPLEMENTATION as KERNELS

__version__ = "0.1.0"

__all__ = [
    "KERNELS",
    "gen_signal",
    "gt_measure",
    "l2_error",
    "sign_measure",
    "sign_to_gt",
    "sign_value",
]
