"""Entry points: badam-train and badam-predict."""
from __future__ import annotations

import argparse
import sys

from badam_trainer.data import load_dataset
from badam_trainer.model import ModelConfig, build_model
from badam_trainer.predict import predict_heatmaps
from badam_trainer.train import TrainConfig, train


def train_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="badam-train",
        description="Train the baseline-labelling network on page images "
                    "with PAGE XML ground truth.")
    parser.add_argument("--train-manifest", required=True)
    parser.add_argument("--val-manifest", required=True)
    parser.add_argument("--out", required=True, help="checkpoint directory")
    parser.add_argument("--encoder-weights", default="imagenet",
                        help='"imagenet", "random", or a local .pth path')
    parser.add_argument("--scale", type=int, default=1200,
                        help="shortest-edge size at processing scale")
    parser.add_argument("--stroke", type=int, default=5,
                        help="target stroke width at processing scale")
    parser.add_argument("--lr", type=float, default=1e-4)
    parser.add_argument("--weight-decay", type=float, default=1e-6)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--patience", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    cfg = TrainConfig(lr=args.lr, weight_decay=args.weight_decay,
                      scale_short_edge=args.scale, stroke_width=args.stroke,
                      patience=args.patience, max_epochs=args.epochs,
                      seed=args.seed)
    try:
        model = build_model(ModelConfig(encoder_weights=args.encoder_weights))
        train_set = load_dataset(args.train_manifest, cfg.scale_short_edge,
                                 cfg.stroke_width)
        val_set = load_dataset(args.val_manifest, cfg.scale_short_edge,
                               cfg.stroke_width)
        checkpoint, metrics = train(model, train_set, val_set, cfg, args.out)
    except (RuntimeError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    best = max(m["val_f1"] for m in metrics)
    print(f"trained {len(metrics)} epoch(s), best val F1 {best:.4f}")
    print(f"checkpoint -> {checkpoint}")
    return 0


def predict_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="badam-predict",
        description="Run a checkpoint over page images and export 16-bit "
                    "PNG heatmaps plus scale sidecars.")
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("--images", nargs="+", required=True)
    parser.add_argument("--out-dir", required=True)
    args = parser.parse_args(argv)
    try:
        written = predict_heatmaps(args.checkpoint, args.images, args.out_dir)
    except (RuntimeError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(train_main())
