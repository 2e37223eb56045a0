"""Compare the numba and numpy power kernels on full unit enumerations.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from splitred import _kernels
from splitred.finite_field import FiniteField

CASES = [
    # (p, residue degree s, d, exponent)
    (2, 1, 12, 4),
    (2, 2, 8, 4),
    (3, 1, 9, 9),
    (3, 2, 6, 3),
    (5, 1, 7, 5),
]


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels._HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")

    print(f"{'p':>2} {'s':>2} {'d':>3} {'m':>3} {'units':>10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for p, s, d, m in CASES:
        F = FiniteField(p, degree=s)
        add, mul = F.np_tables
        idx = _kernels.unit_indices(F.q, d)
        t_np, r_np = best_of(lambda: _kernels.power_numpy(idx, m, F.q, d, add, mul), args.repeat)
        if _kernels._HAVE_NUMBA:
            _kernels.power_numba(idx[:8], m, F.q, d, add, mul)  # compile outside the timing
            t_nb, r_nb = best_of(lambda: _kernels.power_numba(idx, m, F.q, d, add, mul), args.repeat)
            if not np.array_equal(r_np, r_nb):
                raise SystemExit(f"kernel mismatch at p={p} s={s} d={d} m={m}")
            speed = f"{t_np / t_nb:8.1f}x"
            nb = f"{t_nb * 1e3:10.2f}"
        else:
            speed, nb = f"{'-':>8}", f"{'-':>10}"
        print(f"{p:>2} {s:>2} {d:>3} {m:>3} {idx.size:>10,} {t_np * 1e3:10.2f} {nb} {speed}")


if __name__ == "__main__":
    main()
