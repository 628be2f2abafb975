"""Independent brute-force reference implementations used as test oracles.

Everything here is deliberately simple and slow: scalar loops, explicit
flood fills, dense convolutions. None of it shares code with the package
kernels it checks.
"""
from __future__ import annotations

from collections import deque

import numpy as np

EIGHT = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def reflect_index(i: int, n: int) -> int:
    """Symmetric (edge-repeating) reflection of index i into [0, n)."""
    if n == 1:
        return 0
    period = 2 * n
    m = i % period
    if m < 0:
        m += period
    return m if m < n else period - 1 - m


def dense_gaussian(values: np.ndarray, sigma: float) -> np.ndarray:
    """Direct dense 2-D convolution with a normalized Gaussian kernel and
    reflect boundary handling."""
    radius = int(np.ceil(3.0 * sigma))
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(ax * ax) / (2.0 * sigma * sigma))
    kernel = np.outer(w, w)
    kernel /= kernel.sum()
    h, wd = values.shape
    out = np.zeros_like(values)
    for y in range(h):
        for x in range(wd):
            acc = 0.0
            for ky in range(-radius, radius + 1):
                for kx in range(-radius, radius + 1):
                    sy = reflect_index(y + ky, h)
                    sx = reflect_index(x + kx, wd)
                    acc += kernel[ky + radius, kx + radius] * values[sy, sx]
            out[y, x] = acc
    return out


def flood_hysteresis(values: np.ndarray, t_low: float, t_high: float) -> np.ndarray:
    """BFS flood fill from >=t_high seeds through >=t_low pixels."""
    h, w = values.shape
    out = np.zeros((h, w), dtype=bool)
    queue = deque()
    for y in range(h):
        for x in range(w):
            if values[y, x] >= t_high:
                out[y, x] = True
                queue.append((y, x))
    while queue:
        y, x = queue.popleft()
        for dy, dx in EIGHT:
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and not out[ny, nx] \
                    and values[ny, nx] >= t_low:
                out[ny, nx] = True
                queue.append((ny, nx))
    return out


def flood_labels(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Flood-fill labeling in raster order of each component's first pixel."""
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    count = 0
    for y in range(h):
        for x in range(w):
            if not mask[y, x] or labels[y, x]:
                continue
            count += 1
            queue = deque([(y, x)])
            labels[y, x] = count
            while queue:
                cy, cx = queue.popleft()
                for dy, dx in EIGHT:
                    ny, nx = cy + dy, cx + dx
                    if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] \
                            and not labels[ny, nx]:
                        labels[ny, nx] = count
                        queue.append((ny, nx))
    return labels, count


def is_simple_point(mask: np.ndarray, y: int, x: int) -> bool:
    """Deleting (y, x) keeps foreground 8-topology and background
    4-topology, decided by explicit component counts in the 3x3 ring."""
    h, w = mask.shape
    ring = []
    for dy, dx in ((0, 1), (-1, 1), (-1, 0), (-1, -1),
                   (0, -1), (1, -1), (1, 0), (1, 1)):
        ny, nx = y + dy, x + dx
        ring.append(bool(mask[ny, nx]) if 0 <= ny < h and 0 <= nx < w else False)
    offs = ((0, 1), (-1, 1), (-1, 0), (-1, -1),
            (0, -1), (1, -1), (1, 0), (1, 1))

    def count(indices, metric):
        remaining = set(indices)
        comps = []
        while remaining:
            stack = [remaining.pop()]
            comp = {stack[0]}
            while stack:
                u = stack.pop()
                for v in list(remaining):
                    if metric(offs[u], offs[v]):
                        remaining.remove(v)
                        comp.add(v)
                        stack.append(v)
            comps.append(comp)
        return comps

    cheb = lambda a, b: max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1
    manh = lambda a, b: abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
    fg = [i for i in range(8) if ring[i]]
    bg = [i for i in range(8) if not ring[i]]
    if len(count(fg, cheb)) != 1:
        return False
    touching = [c for c in count(bg, manh) if c & {0, 2, 4, 6}]
    return len(touching) == 1


def reference_thin(mask: np.ndarray) -> np.ndarray:
    """Sequential directional thinning with the explicit simplicity test."""
    work = mask.astype(bool).copy()
    h, w = work.shape
    changed = True
    while changed:
        changed = False
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            candidates = []
            for y in range(h):
                for x in range(w):
                    if not work[y, x]:
                        continue
                    ny, nx = y + dy, x + dx
                    side = work[ny, nx] if 0 <= ny < h and 0 <= nx < w else False
                    if not side:
                        candidates.append((y, x))
            for y, x in candidates:
                n = sum(1 for oy, ox in EIGHT
                        if 0 <= y + oy < h and 0 <= x + ox < w
                        and work[y + oy, x + ox])
                if n <= 1:
                    continue
                if is_simple_point(work, y, x):
                    work[y, x] = False
                    changed = True
    return work


def naive_sauvola(img: np.ndarray, window: int, k: float,
                  r_dynamic: float = 128.0) -> np.ndarray:
    """Per-pixel windowed statistics without integral images. The float
    expression matches the documented threshold formula; sums are exact
    integers, so results are bit-comparable."""
    radius = window // 2
    padded = np.pad(img.astype(np.int64), radius, mode="symmetric")
    h, w = img.shape
    n = float(window * window)
    out = np.zeros((h, w), dtype=bool)
    for y in range(h):
        for x in range(w):
            block = padded[y:y + window, x:x + window]
            s1 = float(int(block.sum()))
            s2 = float(int((block * block).sum()))
            m = s1 / n
            var = s2 / n - m * m
            if var < 0.0:
                var = 0.0
            s = np.sqrt(var)
            threshold = m * (1.0 + k * (s / r_dynamic - 1.0))
            out[y, x] = img[y, x] < threshold
    return out


# ---------------------------------------------------------------------------
# graph oracles


def _adjacency(pixels):
    nodes = set(pixels)
    adj = {p: [] for p in nodes}
    for x, y in nodes:
        for dy, dx in EIGHT:
            q = (x + dx, y + dy)
            if q in nodes:
                adj[(x, y)].append(q)
    return adj


def _bfs_dists(adj, start):
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def brute_diameter_length(pixels) -> int:
    """Maximum geodesic distance between endpoint candidates of one
    component; double-BFS eccentricity when fewer than two endpoints."""
    adj = _adjacency(pixels)
    endpoints = [p for p, nbrs in adj.items() if len(nbrs) == 1]
    if len(endpoints) >= 2:
        best = -1
        for i, a in enumerate(endpoints):
            dist = _bfs_dists(adj, a)
            for b in endpoints[i + 1:]:
                best = max(best, dist[b])
        return best
    seed = endpoints[0] if endpoints else min(adj, key=lambda p: (p[1], p[0]))
    dist = _bfs_dists(adj, seed)
    u = max(dist, key=lambda p: (dist[p], (-p[0], -p[1])))
    dist_u = _bfs_dists(adj, u)
    return max(dist_u.values())


def reference_simplify(points: np.ndarray, epsilon: float) -> np.ndarray:
    """Recursive Douglas-Peucker with clamped point-to-segment distance."""

    def seg_dist(p, a, b):
        ab = b - a
        denom = float(ab @ ab)
        if denom == 0.0:
            return float(np.hypot(*(p - a)))
        t = max(0.0, min(1.0, float((p - a) @ ab) / denom))
        proj = a + t * ab
        return float(np.hypot(*(p - proj)))

    def rec(lo, hi):
        if hi - lo < 2:
            return [lo, hi]
        dmax, imax = -1.0, lo + 1
        for i in range(lo + 1, hi):
            d = seg_dist(points[i], points[lo], points[hi])
            if d > dmax:
                dmax, imax = d, i
        if dmax > epsilon:
            left = rec(lo, imax)
            right = rec(imax, hi)
            return left[:-1] + right
        return [lo, hi]

    points = np.asarray(points, dtype=np.float64)
    idx = rec(0, len(points) - 1)
    return points[idx]


def max_deviation(points: np.ndarray, polyline: np.ndarray) -> float:
    """Largest distance from any input point to the simplified polyline."""
    worst = 0.0
    for p in points:
        best = np.inf
        for a, b in zip(polyline[:-1], polyline[1:]):
            ab = b - a
            denom = float(ab @ ab)
            if denom == 0.0:
                d = float(np.hypot(*(p - a)))
            else:
                t = max(0.0, min(1.0, float((p - a) @ ab) / denom))
                d = float(np.hypot(*(p - (a + t * ab))))
            best = min(best, d)
        worst = max(worst, best)
    return worst


def signed_orthogonal_offsets(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Scalar-loop signed offsets of points to their nearest polyline
    segment (positive above, i.e. toward -90 deg of the segment direction)."""
    out = np.zeros(len(points))
    segs = list(zip(polyline[:-1], polyline[1:]))
    for i, p in enumerate(points):
        best = np.inf
        best_val = 0.0
        for a, b in segs:
            ab = b - a
            denom = float(ab @ ab)
            if denom == 0.0:
                continue
            t = max(0.0, min(1.0, float((p - a) @ ab) / denom))
            proj = a + t * ab
            d = float(np.hypot(*(p - proj)))
            if d < best:
                length = float(np.hypot(*ab))
                normal = np.array([ab[1] / length, -ab[0] / length])
                best = d
                best_val = float((p - proj) @ normal)
        out[i] = best_val
    return out
