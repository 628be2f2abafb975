"""Pixel-level primitives: smoothing, hysteresis, thinning, labeling and
adaptive binarization.

All functions are pure and operate on 2-D numpy arrays (see badam.types
for the raster conventions). Heavy loops run on the selected kernel
backend (compiled extension or pure NumPy fallback).
"""
from __future__ import annotations

import math

import numpy as np

from badam import _backend
from badam.errors import ParameterError
from badam.types import ComponentLabels


def _check_heatmap(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
        raise ParameterError(f"heatmap must be a non-empty 2-D array, got {h.shape}")
    if h.size and (h.min() < 0.0 or h.max() > 1.0):
        raise ParameterError("heatmap values must lie in [0, 1]")
    return h


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps with radius ceil(3*sigma)."""
    radius = math.ceil(3.0 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return w / w.sum()


def gaussian_smooth(heatmap: np.ndarray, sigma: float = 1.5) -> np.ndarray:
    """Separable Gaussian smoothing with reflect boundary handling.

    The kernel is normalized, so constant inputs pass through unchanged
    and the [0, 1] value range is preserved (a final clip guards against
    float round-off at the boundaries of the range).
    """
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    h = _check_heatmap(heatmap)
    out = _backend.gaussian_separable(h, gaussian_kernel(sigma))
    return np.clip(out, 0.0, 1.0)


def hysteresis_threshold(heatmap: np.ndarray, t_low: float = 0.3,
                         t_high: float = 0.5) -> np.ndarray:
    """Two-threshold binarization.

    A pixel survives iff its value is >= t_low and it is 8-connected,
    through pixels >= t_low, to some seed pixel >= t_high. Comparisons
    are inclusive, so t_low == t_high degenerates to plain thresholding.
    """
    if not (0.0 <= t_low <= t_high <= 1.0):
        raise ParameterError(
            f"need 0 <= t_low <= t_high <= 1, got ({t_low}, {t_high})")
    h = _check_heatmap(heatmap)
    return _backend.hysteresis(h, t_low, t_high)


def skeletonize(mask: np.ndarray) -> np.ndarray:
    """Thin a mask to a 1-pixel-wide skeleton.

    Iterative directional thinning that deletes only simple points:
    output foreground is a subset of the input, 8-connectivity of every
    component is preserved, and every surviving pixel is either an
    endpoint or non-simple (so the result is unit-width except at
    junctions). The exact skeleton shape is not contractual; downstream
    path extraction only relies on these invariants.
    """
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ParameterError(f"mask must be 2-D, got shape {mask.shape}")
    if mask.size == 0 or not mask.any():
        return np.zeros_like(mask, dtype=bool)
    return _backend.thin(mask)


def label_components(mask: np.ndarray) -> ComponentLabels:
    """8-connected component labeling with deterministic label order
    (raster-scan order of each component's first pixel)."""
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ParameterError(f"mask must be 2-D, got shape {mask.shape}")
    labels, count = _backend.label_components(mask)
    return ComponentLabels(labels=labels, count=count)


def sauvola_binarize(img: np.ndarray, window: int = 25, k: float = 0.2,
                     r_dynamic: float = 128.0) -> np.ndarray:
    """Adaptive document binarization.

    Threshold per pixel: T = m * (1 + k * (s / R - 1)) with m, s the mean
    and standard deviation of the centered window (reflect boundary) and
    R the dynamic-range constant. Foreground (ink) is intensity < T, so
    a constant image maps to all-background.
    """
    if window % 2 == 0 or window < 3:
        raise ParameterError(f"window must be odd and >= 3, got {window}")
    if not (0.0 < k < 1.0):
        raise ParameterError(f"k must be in (0, 1), got {k}")
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ParameterError(f"image must be a non-empty 2-D array, got {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise ParameterError("gray image intensities must lie in [0, 255]")
        img = img.astype(np.uint8)
    return _backend.sauvola(img, window, k, r_dynamic)
