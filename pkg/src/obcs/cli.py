"""Command-line interface: ``obcs <subcommand> [flags]``.

Exit status is 0 on success, 1 on a usage or input error, and 2 when a
decode fails or a verified property does not hold. Every subcommand takes
``--seed`` (default 0).
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import io, svg, verify
from .core import MODELS, gen_signal, gt_measure_matrix, sign_measure
from .decode import BihtConfig, DecodeError, binary_round, biht, gt_superset_decode, ruff_decode, superset_recover
from .experiments import (
    ERROR_CURVE_FIELDS,
    SWEEP_FIELDS,
    ErrorCurveConfig,
    SweepConfig,
    rows_to_csv,
    run_bernoulli_sweep,
    run_error_curve,
)
from .matrices import (
    RecoveryParams,
    StackedMatrix,
    bernoulli_matrix,
    constant_weight_random,
    explicit_ruff,
    gaussian_matrix,
    gaussian_rows_needed,
    stacked_matrix,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


_KPLUS1 = re.compile(r"^1/\(k\s*\+\s*1\)$")


def parse_p(text, k=None):
    """A probability given as a decimal or as the literal ``1/(k+1)``."""
    if _KPLUS1.match(text.strip()):
        if k is None:
            raise UsageError("--p 1/(k+1) needs --k")
        return 1.0 / (k + 1)
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"--p: expected a number or '1/(k+1)', got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------------


def cmd_gen_matrix(a):
    kind = a.kind
    if kind in ("gaussian", "bernoulli", "constant-weight") and (a.m is None or a.n is None):
        raise UsageError(f"--kind {kind} needs --m and --n")
    if kind == "gaussian":
        M, fmt = gaussian_matrix(a.m, a.n, a.seed), "real"
    elif kind == "bernoulli":
        p = parse_p(a.p, a.k) if a.p is not None else (1.0 / (a.k + 1) if a.k else None)
        if p is None:
            raise UsageError("--kind bernoulli needs --p or --k")
        M, fmt = bernoulli_matrix(a.m, a.n, p, a.seed), "binary"
    elif kind == "constant-weight":
        if a.k is None:
            raise UsageError("--kind constant-weight needs --k")
        M, fmt = constant_weight_random(a.m, a.n, a.k, a.seed), "binary"
    elif kind == "ruff":
        if a.n is None or a.k is None or a.alpha is None:
            raise UsageError("--kind ruff needs --n, --k and --alpha")
        family, M = explicit_ruff(a.n, a.k, a.alpha)
        fmt = "binary"
    else:  # stacked
        if a.n is None or a.k is None:
            raise UsageError("--kind stacked needs --n and --k")
        p = parse_p(a.p, a.k) if a.p is not None else None
        SM = stacked_matrix(a.n, a.k, eps=a.eps, eta=a.eta, p=p, m1=a.m1, rng=a.seed, m_total=a.m)
        M, fmt = SM.full(), "real"
    _emit(io.dumps_matrix(M, fmt), a.out)
    return EXIT_OK


def cmd_gen_signal(a):
    x = gen_signal(a.n, a.k, a.model, a.seed)
    _emit(io.dumps_vector(x), a.out)
    return EXIT_OK


def cmd_measure(a):
    _, M = io.read_matrix(a.matrix)
    x = io.read_vector(a.signal)
    y = gt_measure_matrix(M, x) if a.gt else sign_measure(M, x)
    _emit(io.dumps_vector(y), a.out)
    return EXIT_OK


def _split_stacked(M, m1):
    if m1 is None:
        binary_rows = np.all(np.isin(M, (0.0, 1.0)), axis=1)
        m1 = int(np.argmin(binary_rows)) if not binary_rows.all() else M.shape[0]
    if not 1 <= m1 < M.shape[0]:
        raise UsageError(f"cannot split a {M.shape[0]}-row matrix at m1={m1}")
    return StackedMatrix(M[:m1].astype(np.uint8), M[m1:].astype(float))


def cmd_decode(a):
    _, M = io.read_matrix(a.matrix)
    y = io.read_vector(a.obs)
    cfg = BihtConfig(max_iters=a.max_iters)
    if a.algo in ("gt", "ruff"):
        S = gt_superset_decode(M, y) if a.algo == "gt" else ruff_decode(M, y)
        _emit(" ".join(str(j) for j in S) + "\n", a.out)
        return EXIT_OK
    if a.k is None:
        raise UsageError(f"--algo {a.algo} needs --k")
    if a.algo == "biht":
        x = biht(M, y, a.k, cfg)
    else:
        SM = _split_stacked(M, a.m1)
        x = superset_recover(SM, y[: SM.m1], y[SM.m1 :], a.k, cfg, on_all_zero=a.on_all_zero)
    if a.binary:
        x = binary_round(x, a.k)
    _emit(io.dumps_vector(x), a.out)
    return EXIT_OK


def _need(a, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError(f"--property {a.property} needs {', '.join(missing)}")


def cmd_verify(a):
    prop = a.property
    lines = []
    if prop == "list-disjunct":
        _need(a, "matrix", "k", "l")
        _, M = io.read_matrix(a.matrix)
        ok = verify.check_list_disjunct(M, a.k, a.l, cap=a.cap)
        lines.append(verify.format_report(f"list-disjunct(k={a.k},l={a.l})", ok, int(ok), 1))
    elif prop == "ruff":
        _need(a, "matrix", "k", "alpha")
        _, M = io.read_matrix(a.matrix)
        ok = verify.check_ruff(M, a.k, a.alpha, cap=a.cap)
        lines.append(verify.format_report(f"robust-uff(k={a.k},alpha={a.alpha})", ok, int(ok), 1))
    elif prop == "list-ruff":
        _need(a, "matrix", "k", "ell")
        _, M = io.read_matrix(a.matrix)
        why = verify.list_ruff_violation(M, verify.ListRuffParams(a.k, a.ell), cap=a.cap)
        lines.append(verify.format_report(f"list-ruff(k={a.k},ell={a.ell})", why is None, int(why is None), 1))
        if why:
            print(f"# {why}", file=sys.stderr)
    elif prop == "ts":
        _need(a, "matrix", "k", "ell")
        _, M = io.read_matrix(a.matrix)
        worst, S = verify.max_TS(M, a.k, cap=a.cap)
        lines.append(verify.format_report(f"max-TS(k={a.k})", worst < a.ell, worst, a.ell))
    elif prop == "property1":
        _need(a, "matrix", "signal")
        _, M = io.read_matrix(a.matrix)
        ok = verify.check_property1(M, io.read_vector(a.signal))
        lines.append(verify.format_report("property1", ok, int(ok), 1))
    elif prop == "facts":
        g1 = np.linspace(-10, 10, 10_000)
        g1 = g1[g1 != 0]
        g2 = np.linspace(0, 1, 10_000)
        f1 = int(np.count_nonzero(~verify.fact_exp_lower(g1)))
        f2 = int(np.count_nonzero(~verify.fact_arccos_lower(g2)))
        lines.append(verify.format_report("fact-exp-lower-violations", f1 == 0, f1, 0))
        lines.append(verify.format_report("fact-arccos-lower-violations", f2 == 0, f2, 0))
    elif prop == "beta-pdf":
        lo, hi = 4, a.n or 200
        worst = max(verify.beta_pdf_at_half(n) - math.sqrt(n) / math.pi for n in range(lo, hi + 1))
        lines.append(verify.format_report(f"beta-pdf-at-half<=sqrt(n)/pi(n=4..{hi})", worst <= 0, worst, 0.0))
    elif prop == "ball-separation":
        _need(a, "eps", "n")
        params = verify.BallSepParams(a.eps, a.delta_net, a.n, a.samples)
        est, se = verify.mc_ball_separation(params, a.seed, workers=a.jobs)
        bound = verify.ball_separation_bound(a.eps, a.delta_net, a.n)
        lines.append(verify.format_report("ball-separation(estimate+3se>=bound)", est + 3 * se >= bound, est + 3 * se, bound))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown property {prop!r}")
    print("\n".join(lines))
    return EXIT_OK if all(ln.startswith("PASS") for ln in lines) else EXIT_FAIL


def cmd_experiment(a):
    if a.trials:
        trials = a.trials
    elif a.full:
        trials = 500 if a.kind == "error-curve" else 1000
    else:
        trials = 100
    if a.kind == "error-curve":
        m_values = a.m_values or [1000, 1500, 2000]
        cfg = ErrorCurveConfig(
            a.n, a.k, m_values, trials=trials,
            p=parse_p(a.p, a.k) if a.p else None, m1=a.m1, base_seed=a.seed,
            biht=BihtConfig(max_iters=a.max_iters),
        )
        rows = run_error_curve(cfg, jobs=a.jobs)
        text, plot = rows_to_csv(rows, ERROR_CURVE_FIELDS), svg.error_curve_svg
    else:
        m_values = a.m_values or [100, 200, 300]
        if a.p_values:
            p_values = [parse_p(v, a.k) for v in a.p_values.split(",")]
        else:
            p_values = [round(0.02 * i, 2) for i in range(1, 11)] + [1.0 / (a.k + 1)]
        cfg = SweepConfig(a.n, a.k, m_values, p_values, trials=trials, base_seed=a.seed)
        rows = run_bernoulli_sweep(cfg, jobs=a.jobs)
        text, plot = rows_to_csv(rows, SWEEP_FIELDS), svg.sweep_svg
    _emit(text, a.out)
    if a.svg:
        Path(a.svg).write_text(plot(rows))
    return EXIT_OK


def cmd_rows_needed(a):
    m2 = gaussian_rows_needed(RecoveryParams(a.n, a.k, a.eps, a.eta))
    print(m2)
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="obcs", description="Superset technique for one-bit compressed sensing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.set_defaults(func=fn)
        return p

    p = add("gen-matrix", cmd_gen_matrix, "draw or construct a measurement matrix")
    p.add_argument("--kind", required=True, choices=["gaussian", "bernoulli", "constant-weight", "ruff", "stacked"])
    p.add_argument("--m", type=int, help="rows (total rows for --kind stacked)")
    p.add_argument("--n", type=int, help="columns")
    p.add_argument("--p", help="Bernoulli probability: a decimal or 1/(k+1)")
    p.add_argument("--k", type=int, help="sparsity")
    p.add_argument("--alpha", type=float, help="Robust-UFF overlap fraction")
    p.add_argument("--m1", type=int, help="group-testing rows of a stacked matrix")
    p.add_argument("--eps", type=float, help="target error; sizes the Gaussian block when --m is absent")
    p.add_argument("--eta", type=float, default=0.01, help="failure probability (default 0.01)")
    p.add_argument("--out", help="output file (default stdout)")

    p = add("gen-signal", cmd_gen_signal, "draw a random sparse unit-norm signal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--model", choices=MODELS, default="real")
    p.add_argument("--out")

    p = add("measure", cmd_measure, "compute sign (or group-testing) observations")
    p.add_argument("--matrix", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--gt", action="store_true", help="emit group-testing bits instead of signs")
    p.add_argument("--out")

    p = add("decode", cmd_decode, "recover a signal or support from observations")
    p.add_argument("--algo", required=True, choices=["superset-biht", "biht", "gt", "ruff"])
    p.add_argument("--matrix", required=True)
    p.add_argument("--obs", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m1", type=int, help="group-testing rows; inferred from the leading 0/1 rows if absent")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--on-all-zero", choices=["error", "full"], default="error")
    p.add_argument("--binary", action="store_true", help="round to the nearest binary signal")
    p.add_argument("--out")

    p = add("verify", cmd_verify, "check a combinatorial or probabilistic property")
    p.add_argument(
        "--property", required=True,
        choices=["list-disjunct", "ruff", "list-ruff", "ts", "property1", "facts", "beta-pdf", "ball-separation"],
    )
    p.add_argument("--matrix")
    p.add_argument("--signal")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta-net", type=float, default=0.0)
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cap", type=int, help="enumeration cap (overrides OBCS_ENUM_CAP)")

    p = add("experiment", cmd_experiment, "run the error-curve or Bernoulli sweep experiment")
    p.add_argument("--kind", required=True, choices=["error-curve", "sweep"])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--m-values", type=_int_list)
    p.add_argument("--p", help="error curve: Bernoulli probability (default 1/(k+1))")
    p.add_argument("--p-values", help="sweep: comma-separated probabilities")
    p.add_argument("--m1", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--full", action="store_true", help="full trial counts: 500 for the error curve, 1000 for the sweep")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV output (default stdout)")
    p.add_argument("--svg", help="also write an SVG plot")

    p = add("rows-needed", cmd_rows_needed, "sufficient Gaussian rows for eps-approximate recovery")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.01)
    return parser


def dispatch(argv):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DecodeError as e:
        print(f"decode failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
