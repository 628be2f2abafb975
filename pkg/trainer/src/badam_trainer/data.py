"""Dataset loading: page images + PAGE XML baselines -> training pairs.

Consumes the toolkit's wire formats directly (PAGE XML files, PNG
images); no code is shared with the detection package. Images are scaled
so the shortest edge hits the processing size and targets are baselines
rasterized at a fixed stroke width at that scale.
"""
from __future__ import annotations

import json
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np
import torch
from PIL import Image

from badam_trainer.model import normalize_image


@dataclass
class Sample:
    image: torch.Tensor   # (1, 3, H, W) normalized
    target: torch.Tensor  # (1, 1, H, W) float 0/1
    height: int
    width: int
    name: str


def read_baselines(xml_path: str) -> list[list[tuple[float, float]]]:
    """Baseline point lists from a PAGE XML file (any namespace version)."""
    root = ET.parse(xml_path).getroot()
    lines = []
    for el in root.iter():
        if el.tag.rsplit("}", 1)[-1] == "Baseline" and el.get("points"):
            pts = []
            for token in el.get("points").split():
                x, y = token.split(",")
                pts.append((float(x), float(y)))
            if len(pts) >= 2:
                lines.append(pts)
    return lines


def scaled_size(width: int, height: int, target_short_edge: int) -> tuple[float, int, int]:
    scale = target_short_edge / min(width, height)
    return scale, round(width * scale), round(height * scale)


def rasterize_target(baselines, scale: float, width: int, height: int,
                     stroke_width: int) -> np.ndarray:
    """Scaled baselines drawn with Bresenham and dilated to the stroke."""
    base = np.zeros((height, width), dtype=bool)
    for line in baselines:
        pts = [(min(max(round(x * scale), 0), width - 1),
                min(max(round(y * scale), 0), height - 1)) for x, y in line]
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
            dx, dy = abs(x1 - x0), abs(y1 - y0)
            sx = 1 if x0 < x1 else -1
            sy = 1 if y0 < y1 else -1
            err = dx - dy
            x, y = x0, y0
            while True:
                base[y, x] = True
                if (x, y) == (x1, y1):
                    break
                e2 = 2 * err
                if e2 > -dy:
                    err -= dy
                    x += sx
                if e2 < dx:
                    err += dx
                    y += sy
    if stroke_width <= 1:
        return base
    out = np.zeros_like(base)
    lo = -((stroke_width - 1) // 2)
    hi = stroke_width // 2
    for oy in range(lo, hi + 1):
        for ox in range(lo, hi + 1):
            ys = slice(max(oy, 0), min(height + oy, height))
            xs = slice(max(ox, 0), min(width + ox, width))
            sy = slice(max(-oy, 0), min(height - oy, height))
            sx = slice(max(-ox, 0), min(width - ox, width))
            out[ys, xs] |= base[sy, sx]
    return out


def load_sample(image_path: str, xml_path: str, scale_short_edge: int,
                stroke_width: int) -> Sample:
    img = Image.open(image_path).convert("RGB")
    scale, new_w, new_h = scaled_size(img.width, img.height, scale_short_edge)
    resized = img.resize((new_w, new_h), Image.BILINEAR)
    target = rasterize_target(read_baselines(xml_path), scale, new_w, new_h,
                              stroke_width)
    return Sample(
        image=normalize_image(np.asarray(resized)),
        target=torch.from_numpy(target.astype(np.float32))[None, None],
        height=new_h, width=new_w,
        name=os.path.splitext(os.path.basename(image_path))[0])


def load_manifest(path: str) -> list[tuple[str, str]]:
    """Manifest JSON: {"pages": [{"image": ..., "xml": ...}, ...]};
    relative paths resolve against the manifest's directory."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    pairs = []
    for entry in doc["pages"]:
        pairs.append((resolve(entry["image"]), resolve(entry["xml"])))
    return pairs


def load_dataset(manifest_path: str, scale_short_edge: int,
                 stroke_width: int) -> list[Sample]:
    return [load_sample(img, xml, scale_short_edge, stroke_width)
            for img, xml in load_manifest(manifest_path)]
