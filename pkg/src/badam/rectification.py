"""Straightening of curved text lines into rectangular strips.

Each polyline segment is rasterized with Bresenham's algorithm; at every
step a control point pair is placed at the environment extents along the
segment normal and the source image is sampled along the line between
them into one output column. "Above" is the side reached by rotating the
segment direction by -90 degrees in screen coordinates (y down), i.e.
visually up for left-to-right baselines.
"""
from __future__ import annotations

import math

import numpy as np

from badam.errors import ParameterError
from badam.raster_ops import label_components
from badam.types import LineEnvironment, RectifiedLine, as_polyline

# defaults sized for pages around 1200 px on the long edge
BAND_RADIUS = 15
CLAMP_MAX = 120
FALLBACK_ABOVE = 24
FALLBACK_BELOW = 12


def bresenham(p, q) -> list[tuple[int, int]]:
    """Integer line rasterization from p to q inclusive, (x, y) tuples."""
    x0, y0 = int(p[0]), int(p[1])
    x1, y1 = int(q[0]), int(q[1])
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    out = [(x0, y0)]
    while (x0, y0) != (x1, y1):
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x0 += sx
        if e2 < dx:
            err += dx
            y0 += sy
        out.append((x0, y0))
    return out


def _segment_normals(pts: np.ndarray) -> np.ndarray:
    """Unit normals per segment: direction rotated -90 deg (screen coords)."""
    d = np.diff(pts, axis=0)
    length = np.hypot(d[:, 0], d[:, 1])
    length[length == 0] = 1.0
    return np.stack([d[:, 1] / length, -d[:, 0] / length], axis=1)


def _polyline_signed_distances(points: np.ndarray, pts: np.ndarray,
                               chunk: int = 32768):
    """Distance and signed orthogonal offset of points to a polyline.

    The sign comes from the nearest segment's normal (positive = above).
    Nearest-segment ties resolve to the earlier segment.
    """
    a = pts[:-1]
    b = pts[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom_safe = np.where(denom == 0, 1.0, denom)
    normals = _segment_normals(pts)
    dist = np.empty(len(points))
    signed = np.empty(len(points))
    for lo in range(0, len(points), chunk):
        p = points[lo:lo + chunk]
        # (N, M) projections onto each segment
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("nmj,mj->nm", ap, ab) / denom_safe, 0.0, 1.0)
        diff = ap - t[:, :, None] * ab[None, :, :]
        d = np.hypot(diff[:, :, 0], diff[:, :, 1])
        j = np.argmin(d, axis=1)
        rows = np.arange(len(p))
        dist[lo:lo + chunk] = d[rows, j]
        signed[lo:lo + chunk] = np.einsum(
            "nj,nj->n", diff[rows, j], normals[j])
    return dist, signed


def estimate_environment(baseline, ink: np.ndarray, *,
                         band_radius: int = BAND_RADIUS,
                         clamp_max: int = CLAMP_MAX,
                         fallback=(FALLBACK_ABOVE, FALLBACK_BELOW)) -> LineEnvironment:
    """Extent of the ink belonging to a baseline, from connected components.

    Collects 8-connected ink components that touch a band of
    +-band_radius px around the polyline and measures the maximum signed
    orthogonal distances of their pixels, clamped to clamp_max. Returns
    the fallback extents when nothing usable intersects the band.
    """
    pts = as_polyline(baseline)
    ink = np.asarray(ink, dtype=bool)
    comp = label_components(ink)
    if comp.count == 0:
        return LineEnvironment(*fallback)

    ys, xs = np.nonzero(ink)
    points = np.stack([xs, ys], axis=1).astype(np.float64)
    # cheap bbox prefilter for band membership
    lo = pts.min(axis=0) - band_radius
    hi = pts.max(axis=0) + band_radius
    near = ((points >= lo) & (points <= hi)).all(axis=1)
    if not near.any():
        return LineEnvironment(*fallback)
    near_dist, _ = _polyline_signed_distances(points[near], pts)
    in_band = near_dist <= band_radius
    if not in_band.any():
        return LineEnvironment(*fallback)

    band_labels = np.unique(comp.labels[ys[near][in_band], xs[near][in_band]])
    selected = np.isin(comp.labels[ys, xs], band_labels)
    _, signed = _polyline_signed_distances(points[selected], pts)
    above = math.ceil(max(signed.max(), 0.0))
    below = math.ceil(max(-signed.min(), 0.0))
    above = min(above, clamp_max)
    below = min(below, clamp_max)
    if above + below < 1:
        return LineEnvironment(*fallback)
    return LineEnvironment(above, below)


def rectify(page: np.ndarray, baseline, env: LineEnvironment) -> RectifiedLine:
    """Straighten the environment around a baseline into a strip.

    Output height is env.above + env.below + 1 with the baseline at row
    env.above; width equals the Bresenham pixel count of the polyline
    (joint pixels shared by consecutive segments counted once). Samples
    outside the page fill with background 255.
    """
    page = np.asarray(page)
    if page.ndim != 2:
        raise ParameterError(f"page image must be 2-D, got shape {page.shape}")
    pts = as_polyline(baseline)
    ph, pw = page.shape
    if (pts[:, 0].min() < 0 or pts[:, 1].min() < 0
            or pts[:, 0].max() >= pw or pts[:, 1].max() >= ph):
        raise ParameterError("baseline leaves the page bounds")

    height = env.above + env.below + 1
    centers = []   # (x, y) int Bresenham pixels
    norms = []     # unit normal per column
    last = None
    for i in range(len(pts) - 1):
        p, q = pts[i], pts[i + 1]
        pi = (int(math.floor(p[0] + 0.5)), int(math.floor(p[1] + 0.5)))
        qi = (int(math.floor(q[0] + 0.5)), int(math.floor(q[1] + 0.5)))
        if pi == qi:
            continue  # zero-length after rounding
        d = q - p
        length = math.hypot(d[0], d[1])
        n = (d[1] / length, -d[0] / length)
        pix = bresenham(pi, qi)
        if last is not None and pix[0] == last:
            pix = pix[1:]
        for xy in pix:
            centers.append(xy)
            norms.append(n)
        last = centers[-1]

    if not centers:
        raise ParameterError("baseline rasterizes to zero columns")

    cx = np.array([c[0] for c in centers], dtype=np.float64)
    cy = np.array([c[1] for c in centers], dtype=np.float64)
    nx = np.array([n[0] for n in norms], dtype=np.float64)
    ny = np.array([n[1] for n in norms], dtype=np.float64)
    coef = (env.above - np.arange(height, dtype=np.float64))[:, None]
    sx = np.floor(cx[None, :] + coef * nx[None, :] + 0.5).astype(np.int64)
    sy = np.floor(cy[None, :] + coef * ny[None, :] + 0.5).astype(np.int64)
    valid = (sx >= 0) & (sx < pw) & (sy >= 0) & (sy < ph)
    image = np.full((height, len(centers)), 255, dtype=np.uint8)
    image[valid] = page[sy[valid], sx[valid]]

    source_map = [((float(cx[i] + env.above * nx[i]), float(cy[i] + env.above * ny[i])),
                   (float(cx[i] - env.below * nx[i]), float(cy[i] - env.below * ny[i])))
                  for i in range(len(centers))]
    return RectifiedLine(image=image, baseline_row=env.above,
                         source_polyline=pts, source_map=source_map)
