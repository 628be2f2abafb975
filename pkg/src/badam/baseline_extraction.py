"""Vectorization of baseline masks into polylines.

Pipeline: skeletonize the mask, treat each skeleton component as a graph
of pixels with 8-neighbor edges, take the path realizing the maximum
graph diameter between endpoint candidates, and simplify it with
Douglas-Peucker.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from badam.errors import ComponentTooSmallError, ParameterError
from badam.raster_ops import label_components, skeletonize

# Fixed raster-order neighbor visiting order makes BFS trees (and thus the
# returned paths) deterministic.
_BFS_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1),
                (0, 1), (1, -1), (1, 0), (1, 1))


def find_endpoints(skel: np.ndarray) -> np.ndarray:
    """Endpoint candidates of a thinned mask as an (N, 2) array of (x, y).

    A 3x3 neighbor-count convolution marks foreground pixels with exactly
    one other foreground pixel in their neighborhood; returned in raster
    order.
    """
    m = np.asarray(skel, dtype=bool)
    if m.ndim != 2:
        raise ParameterError(f"mask must be 2-D, got shape {m.shape}")
    padded = np.pad(m, 1).astype(np.uint8)
    count = np.zeros(m.shape, dtype=np.uint8)
    for dy, dx in _BFS_OFFSETS:
        count += padded[1 + dy:1 + dy + m.shape[0], 1 + dx:1 + dx + m.shape[1]]
    ys, xs = np.nonzero(m & (count == 1))
    return np.stack([xs, ys], axis=1).astype(np.int64)


@dataclass(frozen=True)
class SkeletonGraph:
    """One skeleton component: pixel nodes with implicit 8-neighbor edges."""

    nodes: frozenset  # of (x, y) int tuples
    endpoints: tuple  # nodes with exactly one 8-neighbor, raster order

    @classmethod
    def from_pixels(cls, xs: np.ndarray, ys: np.ndarray) -> "SkeletonGraph":
        nodes = frozenset(zip(xs.tolist(), ys.tolist()))
        endpoints = []
        for x, y in sorted(nodes, key=lambda p: (p[1], p[0])):
            n = sum((x + dx, y + dy) in nodes for dy, dx in _BFS_OFFSETS)
            if n == 1:
                endpoints.append((x, y))
        return cls(nodes=nodes, endpoints=tuple(endpoints))

    def neighbors(self, node):
        x, y = node
        for dy, dx in _BFS_OFFSETS:
            q = (x + dx, y + dy)
            if q in self.nodes:
                yield q


def _bfs(graph: SkeletonGraph, start):
    """Unit-weight BFS; returns (distance, parent) dicts."""
    dist = {start: 0}
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in graph.neighbors(u):
            if v not in dist:
                dist[v] = du + 1
                parent[v] = u
                queue.append(v)
    return dist, parent


def _walk_back(parent, end) -> np.ndarray:
    path = [end]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return np.array(path, dtype=np.int64)


def _farthest(dist):
    """Node at maximum BFS distance; ties resolved to the smallest (x, y)."""
    best = None
    best_key = None
    for node, d in dist.items():
        key = (-d, node)
        if best_key is None or key < best_key:
            best, best_key = node, key
    return best


def diameter_path(graph: SkeletonGraph) -> np.ndarray:
    """Path of maximum graph diameter over endpoint candidates.

    Among all endpoint pairs, picks the pair with the largest geodesic
    (BFS) distance; ties prefer the larger Euclidean endpoint separation,
    then the lexicographically smallest (start, end) points. Components
    without two endpoints (closed loops, loop-with-tail) fall back to
    double BFS, which yields a near-diameter open path.
    """
    if len(graph.nodes) < 2:
        raise ComponentTooSmallError(
            f"component has {len(graph.nodes)} pixel(s), need at least 2")

    if len(graph.endpoints) >= 2:
        bfs_cache = {e: _bfs(graph, e) for e in graph.endpoints}
        best = None
        best_key = None
        for i, a in enumerate(graph.endpoints):
            dist_a = bfs_cache[a][0]
            for b in graph.endpoints[i + 1:]:
                start, end = (a, b) if a <= b else (b, a)
                d = dist_a[b]
                euclid2 = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
                key = (-d, -euclid2, start, end)
                if best_key is None or key < best_key:
                    best, best_key = (start, end), key
        start, end = best
        return _walk_back(bfs_cache[start][1], end)

    # loop fallback: double BFS from the single endpoint or raster-first node
    if graph.endpoints:
        seed = graph.endpoints[0]
    else:
        seed = min(graph.nodes, key=lambda p: (p[1], p[0]))
    dist_s, _ = _bfs(graph, seed)
    u = _farthest(dist_s)
    dist_u, parent_u = _bfs(graph, u)
    v = _farthest(dist_u)
    return _walk_back(parent_u, v)


def _point_segment_distances(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.hypot(pts[:, 0] - a[0], pts[:, 1] - a[1])
    t = np.clip(((pts - a) @ ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(pts[:, 0] - proj[:, 0], pts[:, 1] - proj[:, 1])


def vectorize(path, epsilon: float) -> np.ndarray:
    """Douglas-Peucker simplification of an ordered pixel path.

    Keeps the path endpoints and splits at the farthest point whenever
    the maximum perpendicular deviation exceeds epsilon, so every input
    point ends up within epsilon of the simplified polyline.
    """
    pts = np.asarray(path, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ParameterError(f"path must be (N>=2, 2), got shape {pts.shape}")
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")

    n = len(pts)
    keep = {0, n - 1}
    stack = []
    if n > 2 and np.array_equal(pts[0], pts[-1]):
        # closed path: anchor the farthest point so splits are well defined
        mid = 1 + int(np.argmax(np.hypot(*(pts[1:-1] - pts[0]).T)))
        keep.add(mid)
        stack.extend([(0, mid), (mid, n - 1)])
    else:
        stack.append((0, n - 1))

    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        interior = pts[lo + 1:hi]
        d = _point_segment_distances(interior, pts[lo], pts[hi])
        im = int(np.argmax(d))
        if d[im] > epsilon:
            mid = lo + 1 + im
            keep.add(mid)
            stack.append((lo, mid))
            stack.append((mid, hi))

    out = pts[sorted(keep)]
    # guard against consecutive duplicates from degenerate input paths
    dedup = [out[0]]
    for p in out[1:]:
        if not np.array_equal(p, dedup[-1]):
            dedup.append(p)
    if len(dedup) < 2:
        dedup = [pts[0], pts[-1]]
    return np.array(dedup, dtype=np.float64)


def extract_baselines(mask: np.ndarray, *, epsilon: float = 3.0,
                      min_geodesic: int = 10) -> list[np.ndarray]:
    """Full mask-to-polylines pipeline.

    skeletonize -> per-component diameter path -> Douglas-Peucker. Paths
    with geodesic length below ``min_geodesic`` are dropped as noise.
    Output is ordered top-to-bottom by mean y, then left-to-right by
    mean x, and is independent of any page-level parallelism.
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    skel = skeletonize(mask)
    comp = label_components(skel)
    polylines = []
    if comp.count:
        ys, xs = np.nonzero(comp.labels)
        ids = comp.labels[ys, xs]
        order = np.argsort(ids, kind="stable")
        ys, xs, ids = ys[order], xs[order], ids[order]
        bounds = np.searchsorted(ids, np.arange(1, comp.count + 2))
        for i in range(comp.count):
            lo, hi = bounds[i], bounds[i + 1]
            if hi - lo < 2:
                continue
            graph = SkeletonGraph.from_pixels(xs[lo:hi], ys[lo:hi])
            path = diameter_path(graph)
            if len(path) - 1 < min_geodesic:
                continue
            polylines.append(vectorize(path, epsilon))
    polylines.sort(key=lambda p: (p[:, 1].mean(), p[:, 0].mean()))
    return polylines
