import json

import numpy as np
import pytest

from badam import io_formats as iof
from badam.errors import (MalformedPageXMLError, MissingPointsError,
                          OutOfBoundsError, ParameterError)
from badam.types import Page, SplitManifest


def random_pages(rng, n, width=400, height=300):
    pages = []
    for i in range(n):
        lines = []
        for _ in range(int(rng.integers(0, 8))):
            k = int(rng.integers(2, 6))
            xs = np.sort(rng.integers(0, width, k))
            ys = rng.integers(0, height, k)
            pts = np.stack([xs, ys], 1).astype(float)
            pts = pts[np.concatenate([[True], (np.diff(pts, axis=0) != 0).any(1)])]
            if len(pts) < 2:
                continue
            lines.append(pts)
        pages.append(Page(id=f"p{i:03d}", width=width, height=height,
                          baselines=lines, image_path=f"p{i:03d}.png"))
    return pages


class TestPageXML:
    MINIMAL = (b'<?xml version="1.0"?>'
               b'<PcGts xmlns="http://schema.primaresearch.org/PAGE/gts/'
               b'pagecontent/2013-07-15">'
               b'<Page imageFilename="doc.png" imageWidth="200" imageHeight="100">'
               b'<TextRegion><TextLine>'
               b'<Baseline points="10,50 100,50"/>'
               b'</TextLine></TextRegion></Page></PcGts>')

    def test_minimal_document(self):
        page = iof.read_page_xml(self.MINIMAL)
        assert (page.width, page.height) == (200, 100)
        assert len(page.baselines) == 1
        assert page.baselines[0].tolist() == [[10.0, 50.0], [100.0, 50.0]]

    def test_no_textlines(self):
        data = (b'<PcGts xmlns="http://schema.primaresearch.org/PAGE/gts/'
                b'pagecontent/2013-07-15">'
                b'<Page imageWidth="50" imageHeight="40"/></PcGts>')
        assert iof.read_page_xml(data).baselines == []

    def test_later_namespace_accepted(self):
        data = self.MINIMAL.replace(b"2013-07-15", b"2019-07-15")
        assert len(iof.read_page_xml(data).baselines) == 1

    def test_semantic_round_trip(self):
        rng = np.random.default_rng(100)
        for page in random_pages(rng, 30):
            first = iof.read_page_xml(iof.write_page_xml(page))
            second = iof.read_page_xml(iof.write_page_xml(first))
            assert first.width == second.width == page.width
            assert len(first.baselines) == len(page.baselines)
            for a, b in zip(first.baselines, second.baselines):
                np.testing.assert_array_equal(a, b)

    def test_deterministic_bytes(self):
        rng = np.random.default_rng(101)
        page = random_pages(rng, 1)[0]
        assert iof.write_page_xml(page) == iof.write_page_xml(page)

    def test_round_half_up(self):
        page = Page(id="t", width=20, height=20,
                    baselines=[np.array([[10.5, 3.0], [12.0, 4.5]])])
        data = iof.write_page_xml(page)
        assert b'points="11,3 12,5"' in data

    def test_empty_page_serializes(self):
        page = Page(id="t", width=20, height=20, baselines=[])
        reread = iof.read_page_xml(iof.write_page_xml(page))
        assert reread.baselines == []

    def test_malformed_xml(self):
        with pytest.raises(MalformedPageXMLError):
            iof.read_page_xml(b"<PcGts><Page")
        with pytest.raises(MalformedPageXMLError):
            iof.read_page_xml(b"<NotPage/>")
        with pytest.raises(MalformedPageXMLError):
            iof.read_page_xml(b'<PcGts><Page imageWidth="x" imageHeight="2"/></PcGts>')

    def test_missing_points(self):
        data = (b'<PcGts><Page imageWidth="50" imageHeight="40">'
                b'<TextLine/></Page></PcGts>')
        with pytest.raises(MissingPointsError) as err:
            iof.read_page_xml(data)
        assert err.value.line_index == 0

    def test_unparseable_points(self):
        data = (b'<PcGts><Page imageWidth="50" imageHeight="40">'
                b'<TextLine><Baseline points="1,2 x,y"/></TextLine>'
                b'</Page></PcGts>')
        with pytest.raises(MissingPointsError):
            iof.read_page_xml(data)

    def test_out_of_bounds_located(self):
        data = (b'<PcGts><Page imageWidth="50" imageHeight="40">'
                b'<TextLine><Baseline points="1,2 10,2"/></TextLine>'
                b'<TextLine><Baseline points="1,2 50,2"/></TextLine>'
                b'</Page></PcGts>')
        with pytest.raises(OutOfBoundsError) as err:
            iof.read_page_xml(data)
        assert err.value.line_index == 1


class TestRasterize:
    def test_empty_page(self):
        page = Page(id="t", width=30, height=20, baselines=[])
        assert not iof.rasterize_baselines(page, 3).any()

    def test_horizontal_stroke_one(self):
        page = Page(id="t", width=30, height=10,
                    baselines=[np.array([[3.0, 5.0], [20.0, 5.0]])])
        mask = iof.rasterize_baselines(page, 1)
        assert mask.sum() == 18

    def test_vertices_contained(self):
        rng = np.random.default_rng(102)
        for page in random_pages(rng, 10):
            mask = iof.rasterize_baselines(page, 3)
            for poly in page.baselines:
                for x, y in poly:
                    assert mask[int(round(y)), int(round(x))]

    def test_stroke_width_grows_mask(self):
        page = Page(id="t", width=40, height=20,
                    baselines=[np.array([[5.0, 10.0], [35.0, 10.0]])])
        m1 = iof.rasterize_baselines(page, 1)
        m3 = iof.rasterize_baselines(page, 3)
        assert m3.sum() == 3 * (m1.sum() + 2)  # square dilation pads the ends
        assert (m1 & ~m3).sum() == 0

    def test_bad_stroke(self):
        page = Page(id="t", width=10, height=10, baselines=[])
        with pytest.raises(ParameterError):
            iof.rasterize_baselines(page, 0)


class TestHeatmapPNG:
    def test_all_zero(self):
        h = np.zeros((7, 9))
        np.testing.assert_array_equal(iof.read_heatmap(iof.write_heatmap(h)), h)

    def test_all_max(self):
        h = np.ones((7, 9))
        np.testing.assert_array_equal(iof.read_heatmap(iof.write_heatmap(h)), h)

    def test_random_within_quantization(self):
        rng = np.random.default_rng(103)
        h = rng.random((33, 21))
        back = iof.read_heatmap(iof.write_heatmap(h))
        assert np.abs(back - h).max() <= 1.0 / 65535

    def test_rejects_out_of_range(self):
        with pytest.raises(ParameterError):
            iof.write_heatmap(np.full((3, 3), 1.5))


class TestMaskAndGrayPNG:
    def test_mask_round_trip(self):
        rng = np.random.default_rng(104)
        m = rng.random((15, 17)) < 0.5
        np.testing.assert_array_equal(iof.read_mask_png(iof.write_mask_png(m)), m)

    def test_gray_round_trip(self):
        rng = np.random.default_rng(105)
        img = rng.integers(0, 256, (15, 17), dtype=np.uint8)
        np.testing.assert_array_equal(iof.read_gray_png(iof.write_gray_png(img)), img)


class TestManifest:
    def test_round_trip(self):
        m = SplitManifest(train=[f"p{i}" for i in range(5)], test=["q0", "q1"])
        back = iof.read_split_manifest(iof.write_split_manifest(m))
        assert back.train == m.train and back.test == m.test

    def test_overlap_rejected(self):
        m = SplitManifest(train=["a", "b"], test=["b"])
        with pytest.raises(ValueError):
            iof.write_split_manifest(m)

    def test_malformed(self):
        with pytest.raises(ParameterError):
            iof.read_split_manifest(b'{"train": 3}')


class TestValidateGuidelines:
    def test_clean_page(self):
        page = Page(id="t", width=200, height=100, baselines=[
            np.array([[10.0, 20.0], [180.0, 20.0]]),
            np.array([[10.0, 60.0], [90.0, 63.0], [180.0, 60.0]]),
        ])
        assert iof.validate_guidelines(page) == []

    def test_min_points(self):
        page = Page(id="t", width=100, height=100,
                    baselines=[np.array([[5.0, 5.0]])])
        findings = iof.validate_guidelines(page)
        assert [f.rule_id for f in findings] == ["min-points"]
        assert findings[0].line_index == 0

    def test_duplicate_pair_flagged_once(self):
        line = np.array([[10.0, 20.0], [90.0, 20.0]])
        page = Page(id="t", width=100, height=100,
                    baselines=[line, line.copy() + [0.0, 0.5]])
        findings = iof.validate_guidelines(page)
        assert [f.rule_id for f in findings] == ["duplicate-baseline"]
        assert findings[0].line_index == 1

    def test_nearby_not_duplicate(self):
        page = Page(id="t", width=100, height=100, baselines=[
            np.array([[10.0, 20.0], [90.0, 20.0]]),
            np.array([[10.0, 23.0], [90.0, 23.0]])])
        assert iof.validate_guidelines(page) == []

    def test_self_intersection_matches_oracle(self):
        rng = np.random.default_rng(106)
        flagged = 0
        for _ in range(120):
            k = int(rng.integers(3, 8))
            pts = rng.integers(0, 60, (k, 2)).astype(float)
            pts = pts[np.concatenate([[True], (np.diff(pts, axis=0) != 0).any(1)])]
            if len(pts) < 3:
                continue
            got = iof._self_intersects(pts)
            expected = _oracle_self_intersects(pts)
            assert got == expected
            flagged += got
        assert flagged > 10  # the sample actually exercises both outcomes

    def test_doubling_back(self):
        page = Page(id="t", width=100, height=100, baselines=[
            np.array([[10.0, 20.0], [90.0, 20.0], [40.0, 25.0]])])
        findings = iof.validate_guidelines(page)
        assert "doubling-back" in [f.rule_id for f in findings]

    def test_closed_loop_flagged(self):
        page = Page(id="t", width=100, height=100, baselines=[
            np.array([[10.0, 20.0], [60.0, 20.0], [60.0, 50.0], [10.0, 20.0]])])
        rules = [f.rule_id for f in iof.validate_guidelines(page)]
        assert "doubling-back" in rules


def _oracle_self_intersects(pts):
    """Quadratic segment-pair check via parametric intersection."""
    segs = list(zip(pts[:-1], pts[1:]))
    n = len(segs)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1 and np.array_equal(pts[0], pts[-1]):
                continue
            a, b = segs[i]
            c, d = segs[j]
            r = b - a
            s = d - c
            denom = r[0] * s[1] - r[1] * s[0]
            qp = c - a
            if denom != 0:
                t = (qp[0] * s[1] - qp[1] * s[0]) / denom
                u = (qp[0] * r[1] - qp[1] * r[0]) / denom
                if 0 < t < 1 and 0 < u < 1:
                    return True
            else:
                cross = qp[0] * r[1] - qp[1] * r[0]
                if cross == 0:  # collinear: check 1-D overlap
                    rr = float(r @ r)
                    t0 = float(qp @ r) / rr
                    t1 = t0 + float(s @ r) / rr
                    lo, hi = min(t0, t1), max(t0, t1)
                    if min(hi, 1.0) - max(lo, 0.0) > 0:
                        return True
    return False


class TestReportJSON:
    def test_schema(self):
        from badam.evaluation import evaluate_set
        truth = {"a": [np.array([[0.0, 10.0], [50.0, 10.0]])]}
        report = evaluate_set(truth, truth, 5.0)
        doc = json.loads(iof.report_to_json(report))
        assert doc["schema_version"] == 1
        assert doc["metric"] == "BADAM-toolkit metric"
        assert doc["aggregate"]["f_value"] == 1.0
        assert doc["pages"][0]["page_id"] == "a"
        assert doc["pages"][0]["matches"][0]["truth_index"] == 0
