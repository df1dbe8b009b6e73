"""Timing comparison of the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeats 5]

Reports per-call times for the determinant kernel at several configuration
sizes and for the four-point scan kernel, plus the compiled/pure speedup.
"""

import argparse
import time

import numpy as np

from atiyahdet import _kernels_py

try:
    from atiyahdet import _kernels as _compiled
except ImportError:
    _compiled = None


def time_call(fn, args_list, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a in args_list:
            fn(a)
        dt = time.perf_counter() - t0
        best = min(best, dt)
    return best / len(args_list)


def make_batches(rng, n, count):
    return [rng.normal(size=(n, 3)) for _ in range(count)]


def fmt(seconds):
    if seconds < 1e-6:
        return f"{seconds * 1e9:8.1f} ns"
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    return f"{seconds * 1e3:8.1f} ms"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--count", type=int, default=2000,
                        help="configurations per batch")
    args = parser.parse_args()

    if _compiled is None:
        print("compiled backend unavailable; timing the fallback only")

    rng = np.random.default_rng(0)
    rows = []
    for n in (3, 4, 6, 10):
        batch = make_batches(rng, n, args.count)
        t_py = time_call(_kernels_py.det_and_edge_product, batch, args.repeats)
        t_c = (time_call(_compiled.det_and_edge_product, batch, args.repeats)
               if _compiled else float("nan"))
        rows.append((f"det n={n}", t_c, t_py))

    batch4 = make_batches(rng, 4, args.count)
    t_py = time_call(_kernels_py.tetra_scan, batch4, args.repeats)
    t_c = (time_call(_compiled.tetra_scan, batch4, args.repeats)
           if _compiled else float("nan"))
    rows.append(("tetra_scan", t_c, t_py))

    print(f"{'kernel':<12} {'compiled':>12} {'pure':>12} {'speedup':>9}")
    for name, t_c, t_p in rows:
        speed = t_p / t_c if t_c == t_c else float("nan")
        print(f"{name:<12} {fmt(t_c):>12} {fmt(t_p):>12} {speed:>8.1f}x")


if __name__ == "__main__":
    main()
