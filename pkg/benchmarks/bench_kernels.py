#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Usage: python benchmarks/bench_kernels.py [--size 1024] [--repeats 3]

Workloads mimic one processing-scale page: a smoothed probability map
with line-like ridges for the binarization/thinning path and a random
document image for Sauvola.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from badam._backend import SIMPLE_LUT, get_backend
from badam.raster_ops import gaussian_kernel


def page_like_heatmap(size: int, rng) -> np.ndarray:
    heat = np.zeros((size, size))
    ys = np.linspace(20, size - 20, max(3, size // 32)).astype(int)
    xx = np.arange(size)
    for y in ys:
        wave = (y + 4 * np.sin(xx / 37.0)).astype(int).clip(0, size - 1)
        heat[wave, xx] = 1.0
    from scipy.ndimage import distance_transform_edt
    d = distance_transform_edt(heat == 0)
    heat = np.exp(-(d * d) / 8.0)
    return np.clip(heat + rng.normal(0, 0.02, heat.shape), 0, 1)


def bench(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1024)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    try:
        compiled = get_backend("compiled")
    except ImportError:
        raise SystemExit("compiled extension not built; nothing to compare")
    pure = get_backend("python")

    rng = np.random.default_rng(0)
    heat = page_like_heatmap(args.size, rng)
    weights = gaussian_kernel(1.5)
    mask = (heat >= 0.4).astype(np.uint8)
    img = rng.integers(0, 256, (args.size, args.size), dtype=np.uint8)

    cases = [
        ("gaussian_smooth",
         lambda k: k.gaussian_separable(heat, weights)),
        ("hysteresis",
         lambda k: k.hysteresis(heat, 0.3, 0.5)),
        ("thinning",
         lambda k: k.thin(mask, SIMPLE_LUT)),
        ("label_components",
         lambda k: k.label_components(mask)),
        ("sauvola",
         lambda k: k.sauvola(img, 25, 0.2, 128.0)),
    ]

    print(f"size {args.size}x{args.size}, best of {args.repeats}")
    print(f"{'kernel':<18}{'compiled':>12}{'pure':>12}{'speedup':>10}")
    for name, call in cases:
        t_c = bench(lambda: call(compiled), args.repeats)
        # pure label_components expects a bool mask
        if name == "label_components":
            t_p = bench(lambda: pure.label_components(mask.view(bool)),
                        args.repeats)
        else:
            t_p = bench(lambda: call(pure), args.repeats)
        print(f"{name:<18}{t_c * 1e3:>10.1f}ms{t_p * 1e3:>10.1f}ms"
              f"{t_p / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
