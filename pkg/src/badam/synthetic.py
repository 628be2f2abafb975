"""Deterministic synthetic pages with known ground-truth baselines.

Pages carry ideal (optionally noised) heatmaps whose value at a pixel is
exp(-d^2 / (2 sigma^2)) with d the distance to the nearest rasterized
baseline, plus a rendered gray page image with ink-like strokes for the
rectification path. Everything derives from (seed, spec, page_index)
through splittable RNG streams, so parallel generation is byte-stable.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import distance_transform_edt

from badam.errors import InfeasibleSpecError
from badam.io_formats import rasterize_baselines
from badam.types import Page, SynthSpec

_BG_SHADE = 235


def _page_rng(spec: SynthSpec, page_index: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=spec.seed,
                                 spawn_key=(page_index, stream))
    return np.random.default_rng(seq)


def _line_families(spec: SynthSpec) -> tuple[str, ...]:
    return tuple(f for f in spec.families if f != "ring")


def _make_ring(spec: SynthSpec, rng) -> list[np.ndarray]:
    cx, cy = spec.width / 2.0, spec.height / 2.0
    radius = 0.30 * min(spec.width, spec.height)
    radius *= rng.uniform(0.85, 1.0)
    angles = np.linspace(0.0, 2.0 * math.pi, 73)
    pts = np.stack([cx + radius * np.cos(angles),
                    cy + radius * np.sin(angles)], axis=1)
    pts[-1] = pts[0]
    return [pts]


def _layout_lines(spec: SynthSpec, rng) -> list[np.ndarray]:
    mx = max(16, round(0.05 * spec.width))
    my = max(16, round(0.05 * spec.height))
    n = int(rng.integers(spec.min_lines, spec.max_lines + 1))
    usable = spec.height - 2 * my
    slot = usable / n
    min_gap = 3 * spec.stroke_width
    half_budget = (slot - min_gap) / 2.0
    if half_budget < 1.0:
        raise InfeasibleSpecError(
            f"{n} lines do not fit a {spec.width}x{spec.height} page "
            f"(slot {slot:.1f}px, need gap {min_gap}px)")

    families = _line_families(spec)
    baselines = []
    for i in range(n):
        family = families[rng.integers(0, len(families))]
        y_center = my + slot * (i + 0.5)
        x0 = mx + rng.uniform(0.0, 30.0)
        x1 = spec.width - mx - rng.uniform(0.0, 30.0)

        if family == "two-column":
            gap_col = max(30.0, 0.04 * spec.width)
            xm = spec.width / 2.0
            for lo, hi in ((x0, xm - gap_col / 2), (xm + gap_col / 2, x1)):
                baselines.append(np.array(
                    [[lo, y_center], [hi, y_center]], dtype=np.float64))
            continue

        if family == "sloped" and half_budget >= 2.0:
            half_span = (x1 - x0) / 2.0
            max_slope = min(0.03, (half_budget - 1.0) / half_span)
            slope = rng.uniform(-max_slope, max_slope)
            ym = y_center - slope * half_span
            baselines.append(np.array(
                [[x0, ym], [x1, ym + slope * (x1 - x0)]], dtype=np.float64))
            continue

        if family == "sinusoidal" and half_budget >= 3.0:
            amp = rng.uniform(2.0, min(8.0, half_budget - 1.0))
            wavelength = rng.uniform(150.0, 400.0)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            xs = np.arange(x0, x1, 8.0)
            if xs[-1] < x1 - 1e-9:
                xs = np.append(xs, x1)
            ys = y_center + amp * np.sin(
                2.0 * math.pi * (xs - x0) / wavelength + phase)
            baselines.append(np.stack([xs, ys], axis=1))
            continue

        # horizontal, also the fallback when the budget is too tight
        baselines.append(np.array(
            [[x0, y_center], [x1, y_center]], dtype=np.float64))
    return baselines


def generate(spec: SynthSpec, page_index: int = 0) -> tuple[Page, np.ndarray]:
    """Build one synthetic page and its heatmap."""
    rng = _page_rng(spec, page_index, 0)
    if spec.families == ("ring",):
        baselines = _make_ring(spec, rng)
    else:
        baselines = _layout_lines(spec, rng)
    page = Page(id=f"page_{page_index:04d}", width=spec.width,
                height=spec.height, baselines=baselines,
                image_path=f"page_{page_index:04d}.png")

    raster = rasterize_baselines(page, stroke_width=1)
    d = distance_transform_edt(~raster)
    heatmap = np.exp(-(d * d) / (2.0 * spec.cross_sigma * spec.cross_sigma))
    if spec.noise_sigma > 0:
        heatmap = np.clip(
            heatmap + rng.normal(0.0, spec.noise_sigma, heatmap.shape),
            0.0, 1.0)
    return page, heatmap


def render_page_image(page: Page, spec: SynthSpec, page_index: int = 0) -> np.ndarray:
    """Ink-like rendering of the page: word-grouped strokes rising above
    each baseline with occasional descenders, on a light background."""
    from badam.rectification import bresenham

    rng = _page_rng(spec, page_index, 1)
    img = np.full((page.height, page.width), _BG_SHADE, dtype=np.uint8)
    for poly in page.baselines:
        pts = np.asarray(poly)
        path = []
        for a, b in zip(pts[:-1], pts[1:]):
            seg = bresenham((round(a[0]), round(a[1])),
                            (round(b[0]), round(b[1])))
            path.extend(seg if not path else seg[1:])
        shade = int(rng.integers(25, 60))
        j = 0
        in_word = True
        run = int(rng.integers(20, 60))
        height = float(rng.uniform(8, 14))
        descender_left = 0
        while j < len(path):
            x, y = path[j]
            if in_word:
                height = float(np.clip(height + rng.uniform(-1.5, 1.5), 6, 16))
                top = max(0, y - int(height))
                img[top:y + 1, x] = shade
                if descender_left > 0:
                    bottom = min(page.height - 1, y + descender_left)
                    img[y:bottom + 1, x] = shade
                    descender_left -= 1
                elif rng.random() < 0.02:
                    descender_left = int(rng.integers(3, 10))
            run -= 1
            if run <= 0:
                in_word = not in_word
                run = int(rng.integers(20, 60) if in_word
                          else rng.integers(8, 20))
                if in_word:
                    shade = int(rng.integers(25, 60))
            j += 1
    return img
