"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--scan-n 200000] [--grid 60] [--T 6] [--repeat 3]

Both backends are fed identical float inputs; outputs are compared before
timings are reported.
"""

import argparse
import math
import time

import numpy as np

from littlewood_lab.kernels import backends

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
ERR = 2.0**-52


def best_of(fn, repeat):
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_scan(impl, n_hi, repeat):
    return best_of(lambda: impl.littlewood_scan(1, n_hi, SQRT2, ERR, SQRT3, ERR, 0.05), repeat)


def bench_xeps(impl, T, grid, repeat):
    c = (np.arange(grid) + 0.5) * (T / grid)
    return best_of(lambda: impl.xeps_rows(SQRT2, ERR, SQRT3, ERR, c, c, 0.25 * (1 - 1e-15),
                                          0.25 * (1 + 1e-15)), repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scan-n", type=int, default=200_000)
    ap.add_argument("--grid", type=int, default=60)
    ap.add_argument("--T", type=float, default=6.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = backends()
    rows, outs = [], {}
    for name, impl in impls.items():
        t_scan, scan = bench_scan(impl, args.scan_n, args.repeat)
        t_xeps, xeps = bench_xeps(impl, args.T, args.grid, args.repeat)
        outs[name] = (scan, xeps)
        rows.append((name, t_scan, t_xeps))

    ref = outs["python"]
    for name, (scan, xeps) in outs.items():
        if not (np.array_equal(scan, ref[0]) and np.array_equal(xeps[0], ref[1][0])
                and np.array_equal(xeps[1], ref[1][1])):
            raise SystemExit(f"{name} output differs from the python backend")

    print(f"littlewood_scan n <= {args.scan_n}; xeps_rows {args.grid}x{args.grid} at T = {args.T}")
    print(f"{'backend':<10}{'scan s':>12}{'xeps s':>12}{'scan x':>10}{'xeps x':>10}")
    base = {r[0]: r for r in rows}["python"]
    for name, ts, tx in rows:
        print(f"{name:<10}{ts:>12.4f}{tx:>12.4f}{base[1] / ts:>10.1f}{base[2] / tx:>10.1f}")


if __name__ == "__main__":
    main()
