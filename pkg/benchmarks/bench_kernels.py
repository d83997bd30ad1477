#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot paths: per-region histogram accumulation (feature
extraction) and the chi-square linear scan (ranking). Results are
medians over repeated runs.

    python3 benchmarks/bench_kernels.py --pixels 262144 --entries 2651
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from regiongem._kernels import available_backends


def timeit(fn, repeats: int) -> float:
    runs = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pixels", type=int, default=512 * 512,
                        help="pixels per synthetic image (default: one 512x512 frame)")
    parser.add_argument("--entries", type=int, default=2651,
                        help="index size for the chi-square scan")
    parser.add_argument("--dims", type=int, default=2100,
                        help="feature dimensionality")
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    h = rng.uniform(0.0, 360.0 - 1e-9, args.pixels)
    s = rng.random(args.pixels)
    v = rng.random(args.pixels)
    labels = rng.integers(0, 5, args.pixels).astype(np.uint8)
    query = rng.random(args.dims)
    matrix = np.ascontiguousarray(rng.random((args.entries, args.dims)))

    backends = available_backends()
    print(f"backends: {', '.join(sorted(backends))}")
    print(f"histograms: {args.pixels:,} px | scan: {args.entries:,} x {args.dims} dims")
    print()
    header = f"{'kernel':<14}" + "".join(f"{name:>12}" for name in sorted(backends))
    print(header + f"{'speedup':>10}")

    rows = {
        "histograms": lambda mod: mod.region_histograms(h, s, v, labels, 10, 14, 3, 5),
        "chi2-scan": lambda mod: mod.chi_square_batch(query, matrix),
    }
    for label, call in rows.items():
        times = {
            name: timeit(lambda m=mod: call(m), args.repeats)
            for name, mod in backends.items()
        }
        cells = "".join(f"{times[name] * 1e3:>10.2f}ms" for name in sorted(backends))
        if "compiled" in times and "numpy" in times:
            speedup = f"{times['numpy'] / times['compiled']:>9.2f}x"
        else:
            speedup = f"{'n/a':>10}"
        print(f"{label:<14}{cells}{speedup}")

    if "compiled" in backends and "numpy" in backends:
        ref = backends["numpy"].region_histograms(h, s, v, labels, 10, 14, 3, 5)
        got = backends["compiled"].region_histograms(h, s, v, labels, 10, 14, 3, 5)
        assert np.array_equal(ref, got), "backends disagree on histogram counts"
        print("\nparity: histogram counts bit-identical across backends")


if __name__ == "__main__":
    main()
