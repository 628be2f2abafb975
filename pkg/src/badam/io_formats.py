"""Persistence: PAGE XML baselines, PNG heatmap/image carriers, bitmask
rasterization, annotation-guideline validation, split manifests and
evaluation reports.

Readers are pure; writers go through an atomic temp-file + rename. Only
the PAGE XML subset the toolkit produces (Page / TextRegion / TextLine /
Baseline) is interpreted on read; unknown elements are ignored and never
re-emitted.
"""
from __future__ import annotations

import io
import json
import math
import os
import tempfile
import xml.etree.ElementTree as ET
from dataclasses import asdict

import numpy as np
from PIL import Image
from scipy.spatial import cKDTree

from badam.errors import (MalformedPageXMLError, MissingPointsError,
                          OutOfBoundsError, ParameterError)
from badam.evaluation import resample_polyline
from badam.types import EvalReport, Finding, Page, SplitManifest

PAGE_NS = "http://schema.primaresearch.org/PAGE/gts/pagecontent/2013-07-15"
# fixed timestamp keeps serialization byte-deterministic
_EPOCH = "1970-01-01T00:00:00"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


# ---------------------------------------------------------------------------
# PAGE XML


def read_page_xml(data: bytes, source: str = "<bytes>") -> Page:
    """Parse the PAGE XML subset into a Page.

    Baselines keep document order. Any PAGE namespace version is
    accepted; elements outside the subset are ignored.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedPageXMLError(f"not well-formed XML ({exc})",
                                    source=source) from None
    page_el = next((el for el in root.iter() if _local(el.tag) == "Page"), None)
    if page_el is None:
        raise MalformedPageXMLError("no Page element", source=source)
    try:
        width = int(page_el.get("imageWidth"))
        height = int(page_el.get("imageHeight"))
    except (TypeError, ValueError):
        raise MalformedPageXMLError(
            "Page element lacks integer imageWidth/imageHeight",
            source=source) from None
    if width < 1 or height < 1:
        raise MalformedPageXMLError(
            f"non-positive page dimensions {width}x{height}", source=source)

    baselines = []
    line_index = 0
    for line_el in (el for el in page_el.iter() if _local(el.tag) == "TextLine"):
        baseline_el = next((el for el in line_el
                            if _local(el.tag) == "Baseline"), None)
        if baseline_el is None or not baseline_el.get("points", "").strip():
            raise MissingPointsError("TextLine without Baseline points",
                                     source=source, line_index=line_index)
        points = []
        for token in baseline_el.get("points").split():
            try:
                xs, ys = token.split(",")
                x, y = float(xs), float(ys)
            except ValueError:
                raise MissingPointsError(
                    f"unparseable point {token!r}",
                    source=source, line_index=line_index) from None
            if not (0 <= x < width and 0 <= y < height):
                raise OutOfBoundsError(
                    f"point ({x}, {y}) outside page {width}x{height}",
                    source=source, line_index=line_index)
            points.append((x, y))
        baselines.append(np.array(points, dtype=np.float64))
        line_index += 1

    page_id = page_el.get("imageFilename") or source
    page_id = os.path.splitext(os.path.basename(page_id))[0]
    return Page(id=page_id, width=width, height=height, baselines=baselines,
                image_path=page_el.get("imageFilename") or "")


def write_page_xml(page: Page) -> bytes:
    """Serialize a Page; coordinates round half-up to integers and the
    output bytes are deterministic for identical input."""
    root = ET.Element("PcGts", {"xmlns": PAGE_NS})
    meta = ET.SubElement(root, "Metadata")
    ET.SubElement(meta, "Creator").text = "badam"
    ET.SubElement(meta, "Created").text = _EPOCH
    ET.SubElement(meta, "LastChange").text = _EPOCH
    page_el = ET.SubElement(root, "Page", {
        "imageFilename": page.image_path or f"{page.id}.png",
        "imageWidth": str(int(page.width)),
        "imageHeight": str(int(page.height)),
    })
    region = ET.SubElement(page_el, "TextRegion", {"id": "r0"})
    for i, poly in enumerate(page.baselines):
        pts = np.asarray(poly, dtype=np.float64)
        text = " ".join(f"{_round_half_up(x)},{_round_half_up(y)}"
                        for x, y in pts)
        line = ET.SubElement(region, "TextLine", {"id": f"l{i}"})
        ET.SubElement(line, "Baseline", {"points": text})
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# raster carriers


def rasterize_baselines(page: Page, stroke_width: int = 1) -> np.ndarray:
    """Draw all baselines with Bresenham, dilated to the stroke width."""
    from badam.rectification import bresenham

    if stroke_width < 1:
        raise ParameterError(f"stroke_width must be >= 1, got {stroke_width}")
    base = np.zeros((page.height, page.width), dtype=bool)
    for poly in page.baselines:
        pts = np.asarray(poly, dtype=np.float64)
        ipts = [(min(max(_round_half_up(x), 0), page.width - 1),
                 min(max(_round_half_up(y), 0), page.height - 1))
                for x, y in pts]
        if len(ipts) == 1:
            base[ipts[0][1], ipts[0][0]] = True
        for a, b in zip(ipts[:-1], ipts[1:]):
            for x, y in bresenham(a, b):
                base[y, x] = True
    if stroke_width == 1:
        return base
    out = np.zeros_like(base)
    lo = -((stroke_width - 1) // 2)
    hi = stroke_width // 2
    h, w = base.shape
    for dy in range(lo, hi + 1):
        for dx in range(lo, hi + 1):
            ys = slice(max(dy, 0), min(h + dy, h))
            xs = slice(max(dx, 0), min(w + dx, w))
            sys_ = slice(max(-dy, 0), min(h - dy, h))
            sxs = slice(max(-dx, 0), min(w - dx, w))
            out[ys, xs] |= base[sys_, sxs]
    return out


def write_heatmap(heatmap: np.ndarray) -> bytes:
    """Encode a [0,1] heatmap as a single-channel 16-bit PNG."""
    arr = np.asarray(heatmap, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0 or arr.min() < 0 or arr.max() > 1:
        raise ParameterError("heatmap must be 2-D with values in [0, 1]")
    quantized = np.rint(arr * 65535.0).astype(np.uint16)
    img = Image.fromarray(quantized)  # uint16 maps to 16-bit grayscale
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def read_heatmap(data: bytes) -> np.ndarray:
    img = Image.open(io.BytesIO(data))
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ParameterError(f"heatmap PNG must be single-channel, got {img.mode}")
    return arr / 65535.0


def write_mask_png(mask: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(mask, dtype=bool).astype(np.uint8) * 255,
                    mode="L").save(buf, format="PNG")
    return buf.getvalue()


def read_mask_png(data: bytes) -> np.ndarray:
    return np.asarray(Image.open(io.BytesIO(data)).convert("L")) > 127


def write_gray_png(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="L").save(
        buf, format="PNG")
    return buf.getvalue()


def read_gray_png(data: bytes) -> np.ndarray:
    """Load any raster as a grayscale uint8 image (color converts by
    luminance)."""
    return np.asarray(Image.open(io.BytesIO(data)).convert("L"))


# ---------------------------------------------------------------------------
# annotation guideline validation


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _proper_intersection(p1, p2, q1, q2) -> bool:
    """True for a crossing or a positive-length collinear overlap;
    mere endpoint contact does not count."""
    d1 = _cross2(p2 - p1, q1 - p1)
    d2 = _cross2(p2 - p1, q2 - p1)
    d3 = _cross2(q2 - q1, p1 - q1)
    d4 = _cross2(q2 - q1, p2 - q1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) \
            and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # collinear: overlap of projections onto the dominant axis
        axis = int(abs(p2[0] - p1[0]) < abs(p2[1] - p1[1]))
        lo1, hi1 = sorted((p1[axis], p2[axis]))
        lo2, hi2 = sorted((q1[axis], q2[axis]))
        return min(hi1, hi2) - max(lo1, lo2) > 0
    return False


def _self_intersects(pts: np.ndarray) -> bool:
    n = len(pts) - 1
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1 and np.array_equal(pts[0], pts[-1]):
                continue  # closed polyline: first/last segments share a node
            if _proper_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]):
                return True
    return False


def validate_guidelines(page: Page) -> list[Finding]:
    """Mechanical checks of the annotation rules.

    min-points: baselines need at least 2 points.
    self-intersection: no crossing segments within a baseline.
    duplicate-baseline: no two baselines within 1 px of each other
    everywhere (mutual max nearest-sample distance < 1).
    doubling-back: progression along the dominant direction must never
    reverse by more than 90 degrees.
    """
    findings = []
    samples = []
    for i, poly in enumerate(page.baselines):
        pts = np.asarray(poly, dtype=np.float64)
        if len(pts) < 2:
            findings.append(Finding(page.id, i, "min-points",
                                    f"baseline has {len(pts)} point(s)"))
            samples.append(pts.reshape(-1, 2))
            continue
        samples.append(resample_polyline(pts))
        if _self_intersects(pts):
            findings.append(Finding(page.id, i, "self-intersection",
                                    "baseline crosses itself"))
        dominant = pts[-1] - pts[0]
        if float(dominant @ dominant) == 0.0:
            findings.append(Finding(page.id, i, "doubling-back",
                                    "baseline ends where it starts"))
        else:
            seg = np.diff(pts, axis=0)
            if (seg @ dominant < 0).any():
                findings.append(Finding(
                    page.id, i, "doubling-back",
                    "segment direction reverses against the dominant direction"))

    for i in range(len(samples)):
        if len(samples[i]) == 0:
            continue
        tree_i = cKDTree(samples[i])
        for j in range(i + 1, len(samples)):
            if len(samples[j]) == 0:
                continue
            lo_i, hi_i = samples[i].min(axis=0), samples[i].max(axis=0)
            lo_j, hi_j = samples[j].min(axis=0), samples[j].max(axis=0)
            if (lo_i > hi_j + 1).any() or (hi_i < lo_j - 1).any():
                continue
            d_ji, _ = tree_i.query(samples[j])
            if d_ji.max() >= 1.0:
                continue
            d_ij, _ = cKDTree(samples[j]).query(samples[i])
            if d_ij.max() < 1.0:
                findings.append(Finding(
                    page.id, j, "duplicate-baseline",
                    f"duplicates baseline {i} (mutual distance < 1 px)"))
    return findings


# ---------------------------------------------------------------------------
# manifests and reports


def read_split_manifest(data: bytes) -> SplitManifest:
    try:
        obj = json.loads(data)
        manifest = SplitManifest(train=list(obj["train"]), test=list(obj["test"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise ParameterError(f"bad split manifest: {exc}") from None
    manifest.validate()
    return manifest


def write_split_manifest(manifest: SplitManifest) -> bytes:
    manifest.validate()
    return json.dumps({"train": manifest.train, "test": manifest.test},
                      indent=2).encode() + b"\n"


def report_to_json(report: EvalReport) -> bytes:
    doc = {
        "schema_version": 1,
        "metric": report.metric,
        "tolerance": report.tolerance_used,
        "aggregate": {
            "precision": report.precision,
            "recall": report.recall,
            "f_value": report.f_value,
        },
        "pages": [
            {
                "page_id": s.page_id,
                "precision": s.precision,
                "recall": s.recall,
                "f_value": s.f_value,
                "tolerance": s.tolerance,
                "matches": [asdict(m) for m in s.matches],
            }
            for s in report.per_page
        ],
    }
    return json.dumps(doc, indent=2).encode() + b"\n"


# ---------------------------------------------------------------------------
# atomic file helpers


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_page(path) -> Page:
    with open(path, "rb") as fh:
        return read_page_xml(fh.read(), source=os.fspath(path))


def save_page(page: Page, path) -> None:
    atomic_write_bytes(path, write_page_xml(page))
