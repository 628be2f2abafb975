"""Tolerance-based precision/recall scoring of detected baselines.

This is the toolkit's own, precisely pinned metric ("BADAM-toolkit
metric"): polylines are resampled at 1-px arc length, predictions are
paired one-to-one with ground-truth lines by greedy highest mutual
coverage, and a sample counts as covered when it lies within the
tolerance of its partner line's samples. Scores are not number-for-number
comparable with other published baseline-detection metrics.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from badam._parallel import thread_map
from badam.errors import PageSetMismatchError, ParameterError
from badam.types import EvalReport, LineMatch, PageScore, as_polyline

DEFAULT_TOLERANCE = 20.0
METRIC_NAME = "BADAM-toolkit metric"


def resample_polyline(poly, spacing: float = 1.0) -> np.ndarray:
    """Points along the polyline at fixed arc-length steps (incl. start)."""
    pts = as_polyline(poly)
    seg = np.diff(pts, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    total = float(seg_len.sum())
    if total == 0.0:
        return pts[:1]
    stations = np.arange(0.0, total + 1e-9, spacing)
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    idx = np.clip(np.searchsorted(cum, stations, side="right") - 1, 0, len(seg) - 1)
    frac = (stations - cum[idx]) / np.where(seg_len[idx] == 0, 1.0, seg_len[idx])
    return pts[idx] + frac[:, None] * seg[idx]


def auto_tolerance(truth_polylines, default: float = DEFAULT_TOLERANCE) -> float:
    """0.25 x median vertical gap between line centers; default when the
    page has fewer than two lines (floored at 1 px)."""
    if len(truth_polylines) < 2:
        return default
    ys = sorted(float(np.asarray(p)[:, 1].mean()) for p in truth_polylines)
    gaps = np.diff(ys)
    return max(1.0, 0.25 * float(np.median(gaps)))


def _coverage_pairs(pred_samples, truth_samples, tolerance):
    """Covered-sample counts for every candidate (truth, pred) pair."""
    pred_boxes = [(s.min(axis=0) - tolerance, s.max(axis=0) + tolerance)
                  for s in pred_samples]
    truth_boxes = [(s.min(axis=0), s.max(axis=0)) for s in truth_samples]
    trees_t = [None] * len(truth_samples)
    trees_p = [None] * len(pred_samples)
    out = {}
    for ti, (tlo, thi) in enumerate(truth_boxes):
        for pi, (plo, phi) in enumerate(pred_boxes):
            if (tlo > phi).any() or (thi < plo).any():
                continue
            if trees_t[ti] is None:
                trees_t[ti] = cKDTree(truth_samples[ti])
            if trees_p[pi] is None:
                trees_p[pi] = cKDTree(pred_samples[pi])
            dp, _ = trees_t[ti].query(pred_samples[pi],
                                      distance_upper_bound=tolerance)
            dt, _ = trees_p[pi].query(truth_samples[ti],
                                      distance_upper_bound=tolerance)
            cov_p = int((dp <= tolerance).sum())
            cov_t = int((dt <= tolerance).sum())
            if cov_p or cov_t:
                out[(ti, pi)] = (cov_p, cov_t)
    return out


def evaluate_page(predicted, truth, tolerance: float):
    """Score one page; returns (precision, recall, f_value, matches)."""
    if tolerance <= 0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")
    if not predicted and not truth:
        return 1.0, 1.0, 1.0, []
    if not predicted or not truth:
        return 0.0, 0.0, 0.0, []

    pred_samples = [resample_polyline(p) for p in predicted]
    truth_samples = [resample_polyline(t) for t in truth]
    n_pred = sum(len(s) for s in pred_samples)
    n_truth = sum(len(s) for s in truth_samples)

    coverage = _coverage_pairs(pred_samples, truth_samples, tolerance)
    candidates = sorted(
        coverage.items(),
        key=lambda kv: (-(kv[1][0] + kv[1][1])
                        / (len(pred_samples[kv[0][1]]) + len(truth_samples[kv[0][0]])),
                        kv[0][0], kv[0][1]))
    truth_used = set()
    pred_used = set()
    matches = []
    covered_pred = 0
    covered_truth = 0
    for (ti, pi), (cov_p, cov_t) in candidates:
        if ti in truth_used or pi in pred_used:
            continue
        truth_used.add(ti)
        pred_used.add(pi)
        mutual = (cov_p + cov_t) / (len(pred_samples[pi]) + len(truth_samples[ti]))
        matches.append(LineMatch(truth_index=ti, pred_index=pi,
                                 mutual_coverage=mutual))
        covered_pred += cov_p
        covered_truth += cov_t

    precision = covered_pred / n_pred
    recall = covered_truth / n_truth
    f_value = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f_value, matches


def evaluate_set(predicted_pages: dict, truth_pages: dict,
                 tolerance=DEFAULT_TOLERANCE) -> EvalReport:
    """Score a page set; aggregate is the unweighted per-page mean.

    ``tolerance`` is a pixel value or "auto" (0.25 x the median vertical
    line gap of each truth page). Pages are evaluated in parallel under
    the BADAM_THREADS cap; aggregation order is deterministic.
    """
    missing_pred = set(truth_pages) - set(predicted_pages)
    missing_truth = set(predicted_pages) - set(truth_pages)
    if missing_pred or missing_truth:
        raise PageSetMismatchError(missing_pred, missing_truth)
    auto = isinstance(tolerance, str)
    if auto and tolerance != "auto":
        raise ParameterError(f"tolerance must be a number or 'auto', got {tolerance!r}")
    if not auto and tolerance <= 0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")

    page_ids = sorted(truth_pages)

    def score(page_id: str) -> PageScore:
        truth = truth_pages[page_id]
        tol = auto_tolerance(truth) if auto else float(tolerance)
        p, r, f, matches = evaluate_page(predicted_pages[page_id], truth, tol)
        return PageScore(page_id=page_id, precision=p, recall=r, f_value=f,
                         matches=matches, tolerance=tol)

    per_page = thread_map(score, page_ids)
    n = len(per_page)
    return EvalReport(
        per_page=per_page,
        precision=sum(s.precision for s in per_page) / n if n else 1.0,
        recall=sum(s.recall for s in per_page) / n if n else 1.0,
        f_value=sum(s.f_value for s in per_page) / n if n else 1.0,
        tolerance_used="auto" if auto else repr(float(tolerance)),
        metric=METRIC_NAME,
    )
