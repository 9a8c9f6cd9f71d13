#!/usr/bin/env python3
"""Compare the compiled and numpy kernel backends on the hot paths.

Times the two per-event kernels (pixel counting and tile binning) and
the end-to-end estimate on a synthetic recording, for every backend
available in this install.

Usage: python benchmarks/bench_kernels.py [--events 3000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from pulsegram import SensorGeometry, estimate_hr, generate
from pulsegram._kernels import available_backends
from pulsegram.synth import SynthConfig

FRAME = SensorGeometry(1280, 720)


def make_workload(n_events: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.integers(0, 15_000_000, n_events)).astype(np.int64)
    x = rng.integers(0, FRAME.width, n_events).astype(np.int32)
    y = rng.integers(0, FRAME.height, n_events).astype(np.int32)
    p = rng.integers(0, 2, n_events).astype(np.int8)
    return t, x, y, p


def best_of(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--events", type=int, default=3_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    t, x, y, p = make_workload(args.events)
    backends = available_backends()
    print(f"workload: {args.events} events, frame "
          f"{FRAME.width}x{FRAME.height}, best of {args.repeat}")
    print(f"backends: {', '.join(backends)}\n")

    header = f"{'kernel':<18}" + "".join(f"{name:>12}" for name in backends)
    print(header)
    print("-" * len(header))

    rows = {
        "pixel_counts": lambda b: b.pixel_counts(x, y, FRAME.width,
                                                 FRAME.height),
        "tile_bin_counts": lambda b: b.tile_bin_counts(
            t, x, y, p, 590, 310, 100, 5, 20000.0, 749),
    }
    for name, call in rows.items():
        cells = "".join(f"{best_of(args.repeat, call, b) * 1e3:>10.1f}ms"
                        for b in backends.values())
        print(f"{name:<18}{cells}")

    # end-to-end estimate on a realistic pulsatile stream; backend choice
    # only affects the two kernels above, the rest is shared numpy code
    stream = generate(SynthConfig(pulse_hz=1.2, duration_s=15.0,
                                  geometry=FRAME, background_rate=0.2,
                                  seed=7))
    import pulsegram._kernels as kernels
    saved = (kernels.pixel_counts, kernels.tile_bin_counts)
    cells = ""
    for backend in backends.values():
        kernels.pixel_counts = backend.pixel_counts
        kernels.tile_bin_counts = backend.tile_bin_counts
        cells += (f"{best_of(args.repeat, estimate_hr, stream) * 1e3:>10.1f}"
                  f"ms")
    kernels.pixel_counts, kernels.tile_bin_counts = saved
    print(f"{'estimate_hr':<18}{cells}")
    print(f"\n(estimate on {len(stream)} synthetic events)")


if __name__ == "__main__":
    main()
