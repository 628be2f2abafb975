"""Shared container types.

Rasters are plain 2-D numpy arrays throughout the toolkit:

* heatmap    -- float64 in [0, 1]
* binary mask -- bool
* gray image -- uint8 (0 ink-dark .. 255 background-light)

A polyline is an (N, 2) float64 array with columns (x, y), N >= 2 and no
two consecutive rows identical.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def as_polyline(points) -> np.ndarray:
    """Coerce a point sequence to the canonical (N, 2) float64 layout."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"polyline must be (N, 2), got shape {arr.shape}")
    return arr


def polyline_ok(points: np.ndarray) -> bool:
    """True when the array satisfies the polyline invariants."""
    if points.ndim != 2 or points.shape[1] != 2 or len(points) < 2:
        return False
    return bool((np.abs(np.diff(points, axis=0)).max(axis=1) > 0).all())


@dataclass
class ComponentLabels:
    """8-connected labeling; labels run 1..count in raster order of the
    component's first pixel, 0 is background."""

    labels: np.ndarray  # int32, same shape as the source mask
    count: int

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


@dataclass
class Page:
    """One annotated page: dimensions plus its baselines in document order."""

    id: str
    width: int
    height: int
    baselines: list[np.ndarray] = field(default_factory=list)
    image_path: str = ""


@dataclass
class SplitManifest:
    train: list[str]
    test: list[str]

    def validate(self) -> None:
        overlap = set(self.train) & set(self.test)
        if overlap:
            raise ValueError(f"train/test overlap: {sorted(overlap)[:5]}")


@dataclass
class LineEnvironment:
    """Extent of the text body orthogonal to the baseline, in pixels."""

    above: int
    below: int

    def __post_init__(self):
        if self.above < 0 or self.below < 0 or self.above + self.below < 1:
            raise ValueError(f"degenerate environment ({self.above}, {self.below})")


@dataclass
class RectifiedLine:
    """A straightened line strip plus the sampling geometry that made it."""

    image: np.ndarray  # uint8, height == above + below + 1
    baseline_row: int
    source_polyline: np.ndarray
    # per output column: ((x_above, y_above), (x_below, y_below)) control points
    source_map: list[tuple[tuple[float, float], tuple[float, float]]]


@dataclass
class LineMatch:
    truth_index: int
    pred_index: int
    mutual_coverage: float


@dataclass
class PageScore:
    page_id: str
    precision: float
    recall: float
    f_value: float
    matches: list[LineMatch]
    tolerance: float


@dataclass
class EvalReport:
    per_page: list[PageScore]
    precision: float
    recall: float
    f_value: float
    tolerance_used: str  # "20.0" or "auto"
    metric: str = "BADAM-toolkit metric"


@dataclass
class Finding:
    """One guideline violation located on a page."""

    page_id: str
    line_index: int
    rule_id: str
    message: str


@dataclass(frozen=True)
class SynthSpec:
    """Deterministic synthetic-page recipe; equal spec + seed means
    byte-identical pages."""

    seed: int = 0
    width: int = 1100
    height: int = 900
    min_lines: int = 5
    max_lines: int = 40
    families: tuple[str, ...] = ("horizontal", "sloped", "sinusoidal")
    stroke_width: int = 3
    cross_sigma: float = 2.0
    noise_sigma: float = 0.0

    KNOWN_FAMILIES = ("horizontal", "sloped", "sinusoidal", "two-column", "ring")

    def __post_init__(self):
        for fam in self.families:
            if fam not in self.KNOWN_FAMILIES:
                raise ValueError(f"unknown line family {fam!r}")
        if self.min_lines < 1 or self.max_lines < self.min_lines:
            raise ValueError("bad line count range")
