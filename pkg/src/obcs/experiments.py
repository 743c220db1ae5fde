"""Error-curve and Bernoulli-probability sweep experiments.

Every trial draws from its own seed, derived from the base seed, a stream
label naming the method and parameters, and the trial index. Results are
aggregated in a fixed order, so output tables are byte-identical for any
number of worker processes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .core import gen_signal, l2_error, sign_measure, sign_to_gt, support
from .decode import BihtConfig, DecodeError, biht, gt_superset_decode, superset_recover
from .matrices import bernoulli_matrix, default_m1, default_p, gaussian_matrix, stacked_matrix

__all__ = [
    "ERROR_CURVE_FIELDS",
    "FAILED_ERROR",
    "SWEEP_FIELDS",
    "ErrorCurveConfig",
    "SweepConfig",
    "TrialRecord",
    "derive_trial_seed",
    "error_curve_trial",
    "rows_to_csv",
    "run_bernoulli_sweep",
    "run_error_curve",
    "sweep_trial",
]

ERROR_CURVE_FIELDS = ("n", "k", "m", "m1", "p", "method", "trials", "mean_error", "std_error")
SWEEP_FIELDS = ("n", "k", "m", "p", "trials", "mean_superset_size", "std_superset_size")
METHODS = ("all_gaussian", "superset")

# recorded when a decoder gives up; the largest possible distance between unit vectors
FAILED_ERROR = 2.0


def derive_trial_seed(base_seed, stream_id, trial_index):
    """64-bit seed hashed from ``(base_seed, stream_id, trial_index)``."""
    key = f"{int(base_seed)}\x1f{stream_id}\x1f{int(trial_index)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass(frozen=True)
class ErrorCurveConfig:
    n: int
    k: int
    m_values: tuple
    trials: int = 100
    p: float | None = None
    m1: int | None = None
    base_seed: int = 0
    biht: BihtConfig = field(default_factory=BihtConfig)

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if self.p is None:
            object.__setattr__(self, "p", default_p(self.k))
        if self.m1 is None:
            object.__setattr__(self, "m1", default_m1(self.n, self.k))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        for m in self.m_values:
            if m <= self.m1:
                raise ValueError(f"m={m} leaves no Gaussian rows after m1={self.m1}")


@dataclass(frozen=True)
class SweepConfig:
    n: int
    k: int
    m_values: tuple
    p_values: tuple
    trials: int = 100
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if not self.p_values:
            raise ValueError("p_values must be nonempty")
        if any(not 0.0 < p < 1.0 for p in self.p_values):
            raise ValueError("every p must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class TrialRecord:
    method: str
    m: int
    m1: int
    trial_index: int
    error: float
    superset_size: int | None = None
    superset_contains_support: bool | None = None


def error_curve_trial(cfg, method, m, trial):
    """Run one trial of the error-curve experiment."""
    seed = derive_trial_seed(cfg.base_seed, f"{method}:m={m}:p={cfg.p!r}", trial)
    rng = np.random.default_rng(seed)
    x = gen_signal(cfg.n, cfg.k, "real", rng)
    if method == "all_gaussian":
        A = gaussian_matrix(m, cfg.n, rng)
        try:
            err = l2_error(x, biht(A, sign_measure(A, x), cfg.k, cfg.biht))
        except DecodeError:
            err = FAILED_ERROR
        return TrialRecord(method, m, 0, trial, err)
    SM = stacked_matrix(cfg.n, cfg.k, p=cfg.p, m1=cfg.m1, rng=rng, m_total=m)
    y1, y2 = sign_measure(SM.top, x), sign_measure(SM.bottom, x)
    try:
        xhat, S = superset_recover(SM, y1, y2, cfg.k, cfg.biht, full_output=True)
        err = l2_error(x, xhat)
    except DecodeError:
        return TrialRecord(method, m, cfg.m1, trial, FAILED_ERROR)
    contains = set(support(x)) <= set(S)
    return TrialRecord(method, m, cfg.m1, trial, err, len(S), contains)


def sweep_trial(cfg, m, p, trial):
    """Superset size after group-testing decoding for one trial."""
    seed = derive_trial_seed(cfg.base_seed, f"sweep:m={m}:p={p!r}", trial)
    rng = np.random.default_rng(seed)
    x = gen_signal(cfg.n, cfg.k, "real", rng)
    M = bernoulli_matrix(m, cfg.n, p, rng)
    return len(gt_superset_decode(M, sign_to_gt(sign_measure(M, x))))


def _single_thread():
    # BLAS thread counts must not depend on the worker layout
    threadpool_limits(1)


def _call(args):
    fn, a = args
    return fn(*a)


def _run(fn, arglist, jobs):
    if jobs <= 1:
        with threadpool_limits(1):
            return [fn(*a) for a in arglist]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_single_thread) as pool:
        chunk = max(1, len(arglist) // (jobs * 8))
        return list(pool.map(_call, [(fn, a) for a in arglist], chunksize=chunk))


def _mean_std(values):
    vals = [float(v) for v in values]
    mean = math.fsum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)


def run_error_curve(cfg, jobs=1, return_records=False):
    """Mean and standard deviation of the recovery error per ``(m, method)``.

    Rows follow :data:`ERROR_CURVE_FIELDS`, sorted by ``(m, p, method)``.
    """
    arglist = [(cfg, method, m, t) for m in cfg.m_values for method in METHODS for t in range(cfg.trials)]
    records = _run(error_curve_trial, arglist, jobs)
    rows = []
    for m in sorted(cfg.m_values):
        for method in sorted(METHODS):
            errs = [r.error for r in records if r.m == m and r.method == method]
            mean, std = _mean_std(errs)
            rows.append(
                {
                    "n": cfg.n,
                    "k": cfg.k,
                    "m": m,
                    "m1": cfg.m1 if method == "superset" else 0,
                    "p": cfg.p,
                    "method": method,
                    "trials": len(errs),
                    "mean_error": mean,
                    "std_error": std,
                }
            )
    return (rows, records) if return_records else rows


def run_bernoulli_sweep(cfg, jobs=1):
    """Mean and standard deviation of the superset size per ``(m, p)``."""
    arglist = [(cfg, m, p, t) for m in cfg.m_values for p in cfg.p_values for t in range(cfg.trials)]
    sizes = _run(sweep_trial, arglist, jobs)
    by_key = {}
    for (_, m, p, _), size in zip(arglist, sizes):
        by_key.setdefault((m, p), []).append(size)
    rows = []
    for m, p in sorted(by_key):
        mean, std = _mean_std(by_key[(m, p)])
        rows.append(
            {
                "n": cfg.n,
                "k": cfg.k,
                "m": m,
                "p": p,
                "trials": len(by_key[(m, p)]),
                "mean_superset_size": mean,
                "std_superset_size": std,
            }
        )
    return rows


def rows_to_csv(rows, fields):
    """Render rows as CSV text with a header line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([repr(row[f]) if isinstance(row[f], float) else row[f] for f in fields])
    return buf.getvalue()
