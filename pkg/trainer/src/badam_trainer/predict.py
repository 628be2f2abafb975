"""Heatmap export: one 16-bit PNG per input image at the processing scale
plus a scale sidecar so the detection CLI can map polylines back to the
original resolution."""
from __future__ import annotations

import json
import os

import numpy as np
import torch
from PIL import Image

from badam_trainer.data import scaled_size
from badam_trainer.model import normalize_image
from badam_trainer.train import load_checkpoint


def write_heatmap_png(heatmap: np.ndarray, path: str) -> None:
    arr = np.clip(heatmap, 0.0, 1.0)
    Image.fromarray(np.rint(arr * 65535.0).astype(np.uint16)).save(
        path, format="PNG")


def predict_heatmaps(checkpoint_path: str, image_paths: list[str],
                     out_dir: str) -> list[str]:
    """Returns the heatmap paths written; each gets a
    `<stem>.scale.json` sidecar with the shortest-edge scale factor."""
    model, blob = load_checkpoint(checkpoint_path)
    scale_edge = blob["train_config"]["scale_short_edge"]
    os.makedirs(out_dir, exist_ok=True)
    written = []
    with torch.no_grad():
        for path in image_paths:
            img = Image.open(path).convert("RGB")
            scale, new_w, new_h = scaled_size(img.width, img.height, scale_edge)
            resized = img.resize((new_w, new_h), Image.BILINEAR)
            probs = model(normalize_image(np.asarray(resized)))[0, 0].numpy()
            stem = os.path.splitext(os.path.basename(path))[0]
            out_path = os.path.join(out_dir, stem + ".png")
            write_heatmap_png(probs, out_path)
            sidecar = {
                "scale": scale,
                "original_width": img.width,
                "original_height": img.height,
                "image_filename": os.path.basename(path),
            }
            with open(os.path.join(out_dir, stem + ".scale.json"), "w",
                      encoding="utf-8") as fh:
                json.dump(sidecar, fh, indent=2)
            written.append(out_path)
    return written
