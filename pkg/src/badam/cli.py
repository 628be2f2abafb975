"""Command line interface.

Exit codes: 0 success, 1 validation findings present, 2 I/O or parameter
error. Page-level work parallelizes under the BADAM_THREADS env var cap.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

import badam
from badam import io_formats
from badam._parallel import thread_map
from badam.baseline_extraction import extract_baselines
from badam.errors import BadamError
from badam.evaluation import evaluate_set
from badam.raster_ops import gaussian_smooth, hysteresis_threshold, sauvola_binarize
from badam.rectification import estimate_environment, rectify
from badam.synthetic import generate, render_page_image
from badam.types import Page, SynthSpec


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_scale_sidecar(heatmap_path: str):
    stem, _ = os.path.splitext(heatmap_path)
    sidecar = stem + ".scale.json"
    if not os.path.exists(sidecar):
        return None
    with open(sidecar, "r", encoding="utf-8") as fh:
        return json.load(fh)


def cmd_detect(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)

    def process(path: str) -> str:
        heatmap = io_formats.read_heatmap(_read_bytes(path))
        smoothed = gaussian_smooth(heatmap, args.sigma)
        mask = hysteresis_threshold(smoothed, args.t_low, args.t_high)
        polylines = extract_baselines(mask, epsilon=args.epsilon,
                                      min_geodesic=args.min_geodesic)
        stem = os.path.splitext(os.path.basename(path))[0]
        height, width = heatmap.shape
        image_name = stem + ".png"
        sidecar = _load_scale_sidecar(path)
        if sidecar is not None:
            # map back to the original resolution recorded by the producer
            scale = float(sidecar["scale"])
            width = int(sidecar["original_width"])
            height = int(sidecar["original_height"])
            image_name = sidecar.get("image_filename", image_name)
            polylines = [p / scale for p in polylines]
        polylines = [np.minimum(p, [width - 1, height - 1]) for p in polylines]
        page = Page(id=stem, width=width, height=height,
                    baselines=polylines, image_path=image_name)
        out_path = os.path.join(args.out_dir, stem + ".xml")
        io_formats.save_page(page, out_path)
        return f"{path}: {len(polylines)} baseline(s) -> {out_path}"

    for line in thread_map(process, args.heatmaps):
        print(line)
    return 0


def cmd_rectify(args) -> int:
    page = io_formats.load_page(args.page_xml)
    gray = io_formats.read_gray_png(_read_bytes(args.image))
    if gray.shape != (page.height, page.width):
        print(f"warning: image is {gray.shape[1]}x{gray.shape[0]}, "
              f"page says {page.width}x{page.height}", file=sys.stderr)
    ink = sauvola_binarize(gray, window=args.window, k=args.k)
    os.makedirs(args.out_dir, exist_ok=True)
    meta = []
    for i, poly in enumerate(page.baselines):
        env = estimate_environment(poly, ink, band_radius=args.band_radius)
        strip = rectify(gray, poly, env)
        name = f"{page.id}_line_{i:03d}.png"
        io_formats.atomic_write_bytes(os.path.join(args.out_dir, name),
                                      io_formats.write_gray_png(strip.image))
        meta.append({
            "line": i,
            "file": name,
            "baseline_row": strip.baseline_row,
            "width": int(strip.image.shape[1]),
            "height": int(strip.image.shape[0]),
        })
        print(f"line {i}: {strip.image.shape[1]}x{strip.image.shape[0]} -> {name}")
    io_formats.atomic_write_bytes(
        os.path.join(args.out_dir, f"{page.id}_lines.json"),
        json.dumps(meta, indent=2).encode() + b"\n")
    return 0


def _pages_from_dir(directory: str) -> dict:
    pages = {}
    for name in sorted(os.listdir(directory)):
        if name.endswith(".xml"):
            stem = os.path.splitext(name)[0]
            page = io_formats.load_page(os.path.join(directory, name))
            pages[stem] = page.baselines
    return pages


def cmd_eval(args) -> int:
    predicted = _pages_from_dir(args.pred_dir)
    truth = _pages_from_dir(args.truth_dir)
    tolerance = args.tolerance if args.tolerance == "auto" else float(args.tolerance)
    report = evaluate_set(predicted, truth, tolerance)
    for score in report.per_page:
        print(f"{score.page_id}: P={score.precision:.4f} R={score.recall:.4f} "
              f"F={score.f_value:.4f} (tol {score.tolerance:.1f}px)")
    print(f"aggregate ({report.metric}, {len(report.per_page)} pages): "
          f"P={report.precision:.4f} R={report.recall:.4f} F={report.f_value:.4f}")
    if args.report:
        io_formats.atomic_write_bytes(args.report,
                                      io_formats.report_to_json(report))
        print(f"report -> {args.report}")
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(
        seed=args.seed, width=args.width, height=args.height,
        min_lines=args.min_lines, max_lines=args.max_lines,
        families=tuple(args.families.split(",")),
        stroke_width=args.stroke, cross_sigma=args.cross_sigma,
        noise_sigma=args.noise)
    pages_dir = os.path.join(args.out_dir, "pages")
    heat_dir = os.path.join(args.out_dir, "heatmaps")
    img_dir = os.path.join(args.out_dir, "images")
    for d in (pages_dir, heat_dir, img_dir):
        os.makedirs(d, exist_ok=True)

    def build(index: int) -> str:
        page, heatmap = generate(spec, index)
        image = render_page_image(page, spec, index)
        io_formats.save_page(page, os.path.join(pages_dir, page.id + ".xml"))
        io_formats.atomic_write_bytes(
            os.path.join(heat_dir, page.id + ".png"),
            io_formats.write_heatmap(heatmap))
        io_formats.atomic_write_bytes(
            os.path.join(img_dir, page.id + ".png"),
            io_formats.write_gray_png(image))
        return f"{page.id}: {len(page.baselines)} baseline(s)"

    for line in thread_map(build, range(args.pages)):
        print(line)
    return 0


def cmd_validate(args) -> int:
    total = 0
    for path in args.page_xmls:
        page = io_formats.load_page(path)
        findings = io_formats.validate_guidelines(page)
        for f in findings:
            print(f"{path}:{f.line_index}: {f.rule_id}: {f.message}")
        total += len(findings)
    print(f"{total} finding(s) in {len(args.page_xmls)} file(s)")
    return 1 if total else 0


def cmd_convert(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for path in args.inputs:
        stem = os.path.splitext(os.path.basename(path))[0]
        if args.to == "bitmask":
            page = io_formats.load_page(path)
            mask = io_formats.rasterize_baselines(page, stroke_width=args.stroke)
            out = os.path.join(args.out_dir, stem + ".png")
            io_formats.atomic_write_bytes(out, io_formats.write_mask_png(mask))
        else:  # pagexml
            mask = io_formats.read_mask_png(_read_bytes(path))
            polylines = extract_baselines(mask, epsilon=args.epsilon)
            page = Page(id=stem, width=mask.shape[1], height=mask.shape[0],
                        baselines=polylines, image_path=stem + ".png")
            out = os.path.join(args.out_dir, stem + ".xml")
            io_formats.save_page(page, out)
        print(f"{path} -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badam",
        description="Baseline detection, rectification and evaluation for "
                    "handwritten manuscript pages.")
    parser.add_argument("--version", action="version",
                        version=f"badam {badam.__version__} "
                                f"({badam.backend_name()} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="heatmaps -> PAGE XML baselines")
    p.add_argument("heatmaps", nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--t-low", type=float, default=0.3)
    p.add_argument("--t-high", type=float, default=0.5)
    p.add_argument("--sigma", type=float, default=1.5)
    p.add_argument("--epsilon", type=float, default=3.0)
    p.add_argument("--min-geodesic", type=int, default=10)
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("rectify", help="extract straightened line strips")
    p.add_argument("page_xml")
    p.add_argument("image")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--band-radius", type=int, default=15)
    p.add_argument("--window", type=int, default=25)
    p.add_argument("--k", type=float, default=0.2)
    p.set_defaults(fn=cmd_rectify)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("pred_dir")
    p.add_argument("truth_dir")
    p.add_argument("--tolerance", default="20")
    p.add_argument("--report")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("synth", help="generate synthetic pages")
    p.add_argument("--pages", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--width", type=int, default=1100)
    p.add_argument("--height", type=int, default=900)
    p.add_argument("--min-lines", type=int, default=5)
    p.add_argument("--max-lines", type=int, default=40)
    p.add_argument("--families", default="horizontal,sloped,sinusoidal")
    p.add_argument("--stroke", type=int, default=3)
    p.add_argument("--cross-sigma", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("validate", help="check annotation guidelines")
    p.add_argument("page_xmls", nargs="+")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("convert", help="convert between PAGE XML and bitmasks")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--to", choices=("bitmask", "pagexml"), required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--stroke", type=int, default=3)
    p.add_argument("--epsilon", type=float, default=3.0)
    p.set_defaults(fn=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (BadamError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
