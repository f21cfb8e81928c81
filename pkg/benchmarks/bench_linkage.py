"""Compare the compiled linkage kernel against the pure-Python fallback.

Run: python benchmarks/bench_linkage.py [--sizes 200,500,1000,2000]

Both backends must return identical results; the table reports wall time for
one full nearest-record search (the dominant cost of a pipeline run once
noise forces record linkage).
"""

from __future__ import annotations

import argparse
import random
import time

from sdclab._kernels import fallback

try:
    from sdclab._kernels import _linkage as compiled
except ImportError:
    compiled = None


def make_inputs(rng: random.Random, n: int, m: int = 4):
    modes = [i % 2 for i in range(m)]
    ranges = [0.0 if mode == 0 else 300.0 for mode in modes]

    def row():
        return [
            float("nan") if rng.random() < 0.05 else float(rng.randint(0, 300))
            for _ in range(m)
        ]

    a = [row() for _ in range(n)]
    b = [row() for _ in range(n)]
    return a, b, modes, ranges


def bench(fn, args, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500,1000,2000")
    parser.add_argument("--columns", type=int, default=4)
    opts = parser.parse_args()
    sizes = [int(s) for s in opts.sizes.split(",")]

    if compiled is None:
        print("compiled kernel not built; only timing the fallback")
    rng = random.Random(1)
    print(f"{'n':>6} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>9}")
    for n in sizes:
        args = make_inputs(rng, n, opts.columns)
        py = bench(fallback.nearest_records, args)
        if compiled is None:
            print(f"{n:>6} {py:>12.4f} {'-':>13} {'-':>9}")
            continue
        cy = bench(compiled.nearest_records, args)
        assert compiled.nearest_records(*args) == fallback.nearest_records(*args), (
            "backends disagree"
        )
        print(f"{n:>6} {py:>12.4f} {cy:>13.4f} {py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
