"""Compare the compiled walk kernel against the pure-Python fallback.

Run: python3 benchmarks/bench_backends.py [--n 2000] [--units 200000]
Both backends draw from the same counter-based streams, so outputs are
bit-identical; only the wall clock differs.
"""

import argparse
import time

import numpy as np

from spikeflow import _kernels_py

try:
    from spikeflow import _kernels
except ImportError:
    _kernels = None


def bench(fn, *args, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--units", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cases = [("remove", False), ("stay", True)]
    print(f"n={args.n} units={args.units}")
    for label, stay in cases:
        t_py = bench(_kernels_py.unit_paths, args.seed, 0, 0, args.units, args.n, stay)
        line = f"{label:>7}: python {t_py * 1e3:8.1f} ms"
        if _kernels is not None:
            t_cy = bench(_kernels.unit_paths, args.seed, 0, 0, args.units, args.n, stay)
            v1, o1 = _kernels.unit_paths(args.seed, 0, 0, args.units, args.n, stay)
            v2, o2 = _kernels_py.unit_paths(args.seed, 0, 0, args.units, args.n, stay)
            assert np.array_equal(v1, v2) and np.array_equal(o1, o2)
            line += f" | cython {t_cy * 1e3:8.1f} ms | speedup {t_py / t_cy:5.1f}x"
        else:
            line += " | cython unavailable"
        print(line)


if __name__ == "__main__":
    main()
