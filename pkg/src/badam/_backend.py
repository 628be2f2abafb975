"""Kernel backend selection.

The compiled extension ``badam._kernels`` is used when importable; the
pure NumPy/Python module ``badam._kernels_py`` is the drop-in fallback.
Set ``BADAM_PURE_PYTHON=1`` to force the fallback (the benchmark and the
equivalence tests use this).
"""
from __future__ import annotations

import os

import numpy as np

from badam import _kernels_py

SIMPLE_LUT = _kernels_py.simple_point_lut()

_FORCE_PURE = os.environ.get("BADAM_PURE_PYTHON", "").strip() not in ("", "0")

if not _FORCE_PURE:
    try:
        from badam import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
else:
    _impl = _kernels_py
    BACKEND = "python"


def backend_name() -> str:
    return BACKEND


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ("compiled"/"python"/None)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from badam import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def gaussian_separable(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return _impl.gaussian_separable(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64))


def hysteresis(values: np.ndarray, t_low: float, t_high: float) -> np.ndarray:
    return _impl.hysteresis(
        np.ascontiguousarray(values, dtype=np.float64), t_low, t_high)


def thin(mask: np.ndarray) -> np.ndarray:
    return _impl.thin(
        np.ascontiguousarray(mask, dtype=np.uint8), SIMPLE_LUT)


def label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    mask_u8 = np.ascontiguousarray(mask, dtype=np.uint8)
    if _impl is _kernels_py:
        return _kernels_py.label_components(mask_u8.view(bool))
    return _impl.label_components(mask_u8)


def sauvola(img: np.ndarray, window: int, k: float, r_dynamic: float) -> np.ndarray:
    return _impl.sauvola(
        np.ascontiguousarray(img, dtype=np.uint8), window, k, r_dynamic)
