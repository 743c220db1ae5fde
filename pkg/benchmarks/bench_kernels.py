"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3]

Times the GV greedy and the subset-coverage enumeration on both backends
and checks that they return identical results.
"""
import argparse
import time

import numpy as np

from obcs import _kernels_py, kernels
from obcs.codes import gv_code_construct
from obcs.matrices import constant_weight_random
from obcs.verify import column_bits

GV_CASES = [(2, 8, 0.25), (4, 4, 0.5), (8, 3, 0.75)]
COVER_CASES = [(40, 30, 4, 0.5), (60, 40, 3, 0.5), (200, 25, 4, 1.0)]


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is available")
    names = sorted(backends)
    print(f"{'case':38s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")

    for q, k, delta in GV_CASES:
        times, gens = {}, {}
        for name in names:
            times[name], code = best_of(lambda: gv_code_construct(q, k, delta, backend=backends[name]), args.repeat)
            gens[name] = code.generator
        assert all(np.array_equal(gens[names[0]], g) for g in gens.values())
        _row(f"gv q={q} k={k} delta={delta} (d={code.d})", names, times)

    for m, n, s, frac in COVER_CASES:
        bits, w = column_bits(constant_weight_random(m, n, s, 0))
        times, outs = {}, {}
        for name in names:
            times[name], outs[name] = best_of(lambda: backends[name].max_covered(bits, w, s, frac, -1), args.repeat)
        assert len({(o[0], tuple(o[1])) for o in outs.values()}) == 1
        _row(f"max_covered m={m} n={n} s={s} frac={frac}", names, times)


def _row(label, names, times):
    speed = times["python"] / times["cython"] if "cython" in times else 1.0
    print(f"{label:38s}" + "".join(f"{times[n]:12.4f}" for n in names) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
