"""Pure NumPy/Python implementations of the pixel kernels.

This is the reference backend: every function here has a compiled twin in
``badam._kernels`` that must produce identical output (the test suite
asserts equality on random inputs). The compiled module is preferred at
import time; this one keeps the package importable and correct on
installs without a C toolchain.

Conventions shared by both backends:

* masks are uint8 0/1 internally, bool at the public surface
* 8-connectivity for region growth and labeling
* "reflect" padding is edge-including (symmetric) reflection, which is
  well defined down to 1-pixel axes and preserves constant inputs
"""
from __future__ import annotations

import numpy as np

# 8-neighbor offsets (dy, dx) in bit order E, NE, N, NW, W, SW, S, SE.
NEIGHBOR_OFFSETS = ((0, 1), (-1, 1), (-1, 0), (-1, -1),
                    (0, -1), (1, -1), (1, 0), (1, 1))

# Directional sub-pass order of the thinning sweep: N, S, W, E border pixels.
THIN_DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def simple_point_lut() -> np.ndarray:
    """256-entry table: lut[bits] == 1 iff deleting a foreground pixel with
    that 8-neighborhood keeps both the foreground 8-topology and the
    background 4-topology intact (the pixel is "simple").

    bits encodes the neighborhood in NEIGHBOR_OFFSETS order.
    """
    offs = NEIGHBOR_OFFSETS

    def component_count(indices, adjacent):
        remaining = set(indices)
        count = 0
        comps = []
        while remaining:
            count += 1
            stack = [remaining.pop()]
            comp = {stack[0]}
            while stack:
                u = stack.pop()
                for v in list(remaining):
                    if adjacent(u, v):
                        remaining.remove(v)
                        comp.add(v)
                        stack.append(v)
            comps.append(comp)
        return count, comps

    def adj8(u, v):
        return max(abs(offs[u][0] - offs[v][0]), abs(offs[u][1] - offs[v][1])) == 1

    def adj4(u, v):
        return abs(offs[u][0] - offs[v][0]) + abs(offs[u][1] - offs[v][1]) == 1

    lut = np.zeros(256, dtype=np.uint8)
    four_neighbors = {0, 2, 4, 6}  # E, N, W, S
    for bits in range(256):
        fg = [i for i in range(8) if bits >> i & 1]
        bg = [i for i in range(8) if not bits >> i & 1]
        n_fg, _ = component_count(fg, adj8)
        _, bg_comps = component_count(bg, adj4)
        n_bg_touching = sum(1 for comp in bg_comps if comp & four_neighbors)
        lut[bits] = 1 if (n_fg == 1 and n_bg_touching == 1) else 0
    return lut


# ---------------------------------------------------------------------------
# gaussian smoothing


def gaussian_separable(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Separable correlation with symmetric-reflect padding.

    ``weights`` is the full normalized 1-D kernel (odd length). Summation
    runs in ascending tap order so the compiled twin is bit-identical.
    """
    radius = len(weights) // 2
    h, w = values.shape
    padded = np.pad(values, radius, mode="symmetric")
    tmp = np.zeros((h + 2 * radius, w), dtype=np.float64)
    for k in range(len(weights)):
        tmp += weights[k] * padded[:, k:k + w]
    out = np.zeros((h, w), dtype=np.float64)
    for k in range(len(weights)):
        out += weights[k] * tmp[k:k + h, :]
    return out


# ---------------------------------------------------------------------------
# connected components (run-based union-find)


def label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected labeling; labels are 1..count in raster order of each
    component's first pixel."""
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if mask.size == 0 or not mask.any():
        return labels, 0

    parent: list[int] = []

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            # keep the smaller id as root so the root is the raster-first run
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    run_row: list[int] = []
    run_start: list[int] = []
    run_end: list[int] = []
    prev: list[int] = []  # run ids of the previous row
    row_u8 = np.zeros(w + 2, dtype=np.int8)
    for y in range(h):
        row_u8[1:-1] = mask[y]
        edges = np.flatnonzero(np.diff(row_u8))
        starts, ends = edges[0::2], edges[1::2]
        cur: list[int] = []
        for s, e in zip(starts, ends):
            rid = len(parent)
            parent.append(rid)
            run_row.append(y)
            run_start.append(int(s))
            run_end.append(int(e))
            cur.append(rid)
        # merge runs that touch under 8-connectivity (diagonal counts)
        i = j = 0
        while i < len(prev) and j < len(cur):
            ps, pe = run_start[prev[i]], run_end[prev[i]]
            cs, ce = run_start[cur[j]], run_end[cur[j]]
            if ps <= ce and pe >= cs:  # extents overlap when widened by 1
                union(prev[i], cur[j])
            if pe < ce:
                i += 1
            else:
                j += 1
        prev = cur

    # order components by the raster position of their first run
    roots = sorted({find(i) for i in range(len(parent))})
    final = {root: idx + 1 for idx, root in enumerate(roots)}
    for rid in range(len(parent)):
        labels[run_row[rid], run_start[rid]:run_end[rid]] = final[find(rid)]
    return labels, len(roots)


# ---------------------------------------------------------------------------
# hysteresis thresholding


def hysteresis(values: np.ndarray, t_low: float, t_high: float) -> np.ndarray:
    """Keep >=t_low pixels 8-connected to a >=t_high seed (inclusive)."""
    low = values >= t_low
    labels, count = label_components(low)
    if count == 0:
        return np.zeros_like(low)
    keep = np.zeros(count + 1, dtype=bool)
    keep[np.unique(labels[values >= t_high])] = True
    keep[0] = False
    return keep[labels]


# ---------------------------------------------------------------------------
# thinning


def thin(mask: np.ndarray, lut: np.ndarray) -> np.ndarray:
    """Directional sequential thinning.

    Per sweep, each of the four border directions collects its candidates
    (foreground with background on that side) from the sweep-start state,
    then deletes them one by one in raster order, re-testing simplicity
    and the endpoint guard against the live raster. Sequential deletion
    of simple points preserves topology exactly; endpoints (<=1 neighbor)
    are never removed, so line ends survive.
    """
    h, w = mask.shape
    work = np.zeros((h + 2, w + 2), dtype=np.uint8)
    work[1:-1, 1:-1] = mask
    offs = NEIGHBOR_OFFSETS
    changed = True
    while changed:
        changed = False
        for dy, dx in THIN_DIRECTIONS:
            inner = work[1:h + 1, 1:w + 1]
            side = work[1 + dy:h + 1 + dy, 1 + dx:w + 1 + dx]
            ys, xs = np.nonzero((inner == 1) & (side == 0))
            for y, x in zip(ys + 1, xs + 1):
                bits = 0
                n = 0
                for bit, (oy, ox) in enumerate(offs):
                    if work[y + oy, x + ox]:
                        bits |= 1 << bit
                        n += 1
                if n <= 1:
                    continue
                if lut[bits]:
                    work[y, x] = 0
                    changed = True
    return work[1:-1, 1:-1].astype(bool)


# ---------------------------------------------------------------------------
# Sauvola adaptive threshold


def sauvola(img: np.ndarray, window: int, k: float, r_dynamic: float) -> np.ndarray:
    """Window mean/std threshold via exact int64 integral images.

    Pixel sums are integer-exact, so this matches a naive windowed
    computation bit for bit as long as the float expression below is kept
    verbatim: m = S1/n; var = S2/n - m*m; T = m*(1 + k*(s/R - 1)).
    """
    radius = window // 2
    padded = np.pad(img.astype(np.int64), radius, mode="symmetric")
    ph, pw = padded.shape
    ii1 = np.zeros((ph + 1, pw + 1), dtype=np.int64)
    ii2 = np.zeros((ph + 1, pw + 1), dtype=np.int64)
    ii1[1:, 1:] = padded.cumsum(0).cumsum(1)
    ii2[1:, 1:] = (padded * padded).cumsum(0).cumsum(1)

    def window_sums(ii):
        return (ii[window:, window:] - ii[:-window, window:]
                - ii[window:, :-window] + ii[:-window, :-window])

    n = float(window * window)
    s1 = window_sums(ii1).astype(np.float64)
    s2 = window_sums(ii2).astype(np.float64)
    m = s1 / n
    var = s2 / n - m * m
    var = np.maximum(var, 0.0)
    s = np.sqrt(var)
    threshold = m * (1.0 + k * (s / r_dynamic - 1.0))
    return img < threshold
