import numpy as np
import pytest

from badam.errors import PageSetMismatchError, ParameterError
from badam.evaluation import (auto_tolerance, evaluate_page, evaluate_set,
                              resample_polyline)


def hline(y, x0=0.0, x1=100.0):
    return np.array([[x0, y], [x1, y]], dtype=np.float64)


def random_page(rng, lines=6, gap=30.0, jitter=0.0):
    polys = []
    for i in range(lines):
        y = 20.0 + i * gap
        pts = np.array([[5.0, y], [55.0, y + rng.uniform(-jitter, jitter)],
                        [105.0, y]])
        polys.append(pts)
    return polys


class TestResample:
    def test_unit_spacing(self):
        s = resample_polyline(hline(0, 0, 10))
        assert len(s) == 11
        np.testing.assert_allclose(np.diff(s[:, 0]), 1.0)

    def test_collinear_vertex_changes_nothing(self):
        a = resample_polyline(np.array([[0.0, 0], [10, 0]]))
        b = resample_polyline(np.array([[0.0, 0], [4, 0], [10, 0]]))
        np.testing.assert_allclose(a, b, atol=1e-9)


class TestEvaluatePage:
    def test_truth_vs_itself(self):
        truth = [hline(10), hline(40), hline(70)]
        p, r, f, matches = evaluate_page(truth, truth, 5.0)
        assert (p, r, f) == (1.0, 1.0, 1.0)
        assert len(matches) == 3

    def test_half_the_lines_perfect(self):
        truth = [hline(10), hline(40), hline(70), hline(100)]
        pred = [hline(10), hline(70)]
        p, r, f, _ = evaluate_page(pred, truth, 5.0)
        assert p == 1.0 and r == 0.5
        assert abs(f - 2 / 3) < 1e-12

    def test_orthogonal_shift_beyond_tolerance(self):
        tol = 5.0
        truth = [hline(40)]
        pred = [hline(40 + 2 * tol)]
        assert evaluate_page(pred, truth, tol)[:3] == (0.0, 0.0, 0.0)

    def test_empty_cases(self):
        assert evaluate_page([], [], 5.0)[:3] == (1.0, 1.0, 1.0)
        assert evaluate_page([], [hline(10)], 5.0)[:3] == (0.0, 0.0, 0.0)
        assert evaluate_page([hline(10)], [], 5.0)[:3] == (0.0, 0.0, 0.0)

    def test_bad_tolerance(self):
        with pytest.raises(ParameterError):
            evaluate_page([hline(1)], [hline(1)], 0.0)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(90)
        for _ in range(30):
            truth = random_page(rng, lines=int(rng.integers(1, 7)), jitter=4)
            pred = random_page(rng, lines=int(rng.integers(1, 7)), jitter=4)
            p1, r1, f1, _ = evaluate_page(pred, truth, 8.0)
            p2, r2, f2, _ = evaluate_page(truth, pred, 8.0)
            assert p1 == pytest.approx(r2, abs=1e-12)
            assert r1 == pytest.approx(p2, abs=1e-12)
            assert f1 == pytest.approx(f2, abs=1e-12)

    def test_tolerance_monotonic(self):
        rng = np.random.default_rng(91)
        for _ in range(30):
            truth = random_page(rng, lines=4, jitter=6)
            pred = [p + rng.normal(0, 3, p.shape) for p in truth[:3]]
            prev = (0.0, 0.0, 0.0)
            for tol in (2.0, 5.0, 12.0, 30.0):
                cur = evaluate_page(pred, truth, tol)[:3]
                assert all(c >= p - 1e-12 for c, p in zip(cur, prev))
                prev = cur

    def test_removing_spurious_prediction_never_lowers_precision(self):
        truth = [hline(10), hline(60)]
        pred = [hline(10), hline(60), hline(300)]
        p_with, *_ = evaluate_page(pred, truth, 5.0)
        p_without, *_ = evaluate_page(pred[:2], truth, 5.0)
        assert p_without >= p_with

    def test_removing_matched_prediction_never_raises_recall(self):
        truth = [hline(10), hline(60)]
        pred = [hline(10), hline(60)]
        _, r_full, _, _ = evaluate_page(pred, truth, 5.0)
        _, r_less, _, _ = evaluate_page(pred[:1], truth, 5.0)
        assert r_less <= r_full

    def test_reparameterization_invariance(self):
        truth = [hline(20), hline(60)]
        pred = [np.array([[0.0, 20], [100, 20]]),
                np.array([[0.0, 60], [30, 60], [71, 60], [100, 60]])]
        a = evaluate_page(pred, truth, 5.0)[:3]
        assert a == (1.0, 1.0, 1.0)

    def test_one_to_one_assignment(self):
        # two predictions on one truth line: only one can match
        truth = [hline(10)]
        pred = [hline(10), hline(11)]
        p, r, f, matches = evaluate_page(pred, truth, 5.0)
        assert len(matches) == 1
        assert r == 1.0 and p < 1.0


class TestAutoTolerance:
    def test_quarter_median_gap(self):
        truth = [hline(10), hline(50), hline(90), hline(150)]
        # gaps 40, 40, 60 -> median 40 -> tol 10
        assert auto_tolerance(truth) == 10.0

    def test_single_line_uses_default(self):
        assert auto_tolerance([hline(10)]) == 20.0


class TestEvaluateSet:
    def test_aggregate_is_mean(self):
        truth = {"a": [hline(10)], "b": [hline(10)]}
        pred = {"a": [hline(10)], "b": [hline(400)]}
        report = evaluate_set(pred, truth, 5.0)
        assert report.precision == 0.5 and report.recall == 0.5
        assert report.f_value == 0.5
        assert [s.page_id for s in report.per_page] == ["a", "b"]
        assert report.metric == "BADAM-toolkit metric"

    def test_mismatched_ids_error_lists_difference(self):
        with pytest.raises(PageSetMismatchError) as err:
            evaluate_set({"a": []}, {"b": []}, 5.0)
        assert "a" in str(err.value) and "b" in str(err.value)

    def test_auto_mode(self):
        truth = {"a": [hline(10), hline(50), hline(90)]}
        report = evaluate_set({"a": [hline(10), hline(50), hline(90)]},
                              truth, "auto")
        assert report.tolerance_used == "auto"
        assert report.per_page[0].tolerance == 10.0
        assert report.f_value == 1.0

    def test_bad_tolerance_string(self):
        with pytest.raises(ParameterError):
            evaluate_set({"a": []}, {"a": []}, "wide")
