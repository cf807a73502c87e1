"""Time the MST kernel's numba and numpy paths against each other.

Run as: python benchmarks/bench_mst.py [--sizes 200 500 1000 2000 4000]
(Unset TOPOCAUSE_NO_NUMBA to benchmark the jitted path.)
"""

import argparse
import time

import numpy as np

from topocause._mst import _HAVE_NUMBA, _prim_numpy


def timed(fn, pts, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(pts)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000, 2000, 4000])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _HAVE_NUMBA:
        from topocause._mst import _prim_numba

        _prim_numba(np.random.default_rng(0).random((10, 2)))  # JIT warmup
    else:
        print("numba unavailable or disabled; timing the numpy path only")

    header = f"{'n':>6}  {'numpy (ms)':>12}"
    if _HAVE_NUMBA:
        header += f"  {'numba (ms)':>12}  {'speedup':>8}  {'equal':>6}"
    print(header)
    for n in args.sizes:
        pts = np.ascontiguousarray(np.random.default_rng(n).random((n, 2)))
        t_np, out_np = timed(_prim_numpy, pts, args.repeats)
        row = f"{n:>6}  {1e3 * t_np:>12.2f}"
        if _HAVE_NUMBA:
            t_nb, out_nb = timed(_prim_numba, pts, args.repeats)
            equal = np.array_equal(np.sort(out_np), np.sort(out_nb))
            row += f"  {1e3 * t_nb:>12.2f}  {t_np / t_nb:>8.1f}x  {'yes' if equal else 'NO':>6}"
        print(row)


if __name__ == "__main__":
    main()
