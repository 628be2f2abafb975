"""Training loop: per-pixel binary cross-entropy on whole images, Adam on
the decoder/head only, early stopping on the binarized validation F1."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass

import torch
import torch.nn as nn

from badam_trainer.data import Sample
from badam_trainer.model import BaselineNet, ModelConfig


@dataclass
class TrainConfig:
    lr: float = 1e-4
    betas: tuple[float, float] = (0.9, 0.999)
    weight_decay: float = 1e-6
    scale_short_edge: int = 1200
    stroke_width: int = 5
    threshold: float = 0.5
    patience: int = 10
    min_improvement: float = 1e-4
    max_epochs: int = 200
    seed: int = 0

    def to_dict(self) -> dict:
        d = self.__dict__.copy()
        d["betas"] = list(self.betas)
        return d


def binarized_f1(model: BaselineNet, samples: list[Sample],
                 threshold: float = 0.5) -> float:
    """Pixel F1 of the thresholded output over a sample set; an empty
    ground truth with an empty prediction counts as a perfect 1.0."""
    was_training = model.training
    model.eval()
    tp = fp = fn = 0
    with torch.no_grad():
        for s in samples:
            pred = model(s.image)[0, 0] >= threshold
            truth = s.target[0, 0] >= 0.5
            tp += int((pred & truth).sum())
            fp += int((pred & ~truth).sum())
            fn += int((~pred & truth).sum())
    if was_training:
        model.train()
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 1.0


def _atomic_save(obj, path: str) -> None:
    # torch's zip writer rejects dot-prefixed (hidden) file names
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".",
                               prefix="ckpt-", suffix=".tmp")
    os.close(fd)
    try:
        torch.save(obj, tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def train(model: BaselineNet, train_set: list[Sample], val_set: list[Sample],
          cfg: TrainConfig, out_dir: str) -> tuple[str, list[dict]]:
    """Returns (best checkpoint path, per-epoch metrics log).

    Stops when the validation F1 has not improved by min_improvement for
    more than `patience` consecutive epochs; the best checkpoint and a
    metrics.json log are persisted in out_dir.
    """
    if not train_set:
        raise ValueError("empty training dataset")
    if not val_set:
        raise ValueError("empty validation dataset")
    os.makedirs(out_dir, exist_ok=True)
    torch.manual_seed(cfg.seed)

    optimizer = torch.optim.Adam(model.trainable_parameters(), lr=cfg.lr,
                                 betas=cfg.betas,
                                 weight_decay=cfg.weight_decay)
    loss_fn = nn.BCELoss()
    checkpoint_path = os.path.join(out_dir, "best.pt")
    metrics: list[dict] = []
    best_f1 = -math.inf
    bad_epochs = 0

    for epoch in range(1, cfg.max_epochs + 1):
        model.train()
        total_loss = 0.0
        for s in train_set:
            optimizer.zero_grad()
            out = model(s.image)
            loss = loss_fn(out, s.target)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach())
        val_f1 = binarized_f1(model, val_set, cfg.threshold)
        improved = val_f1 > best_f1 + cfg.min_improvement
        if improved:
            best_f1 = val_f1
            bad_epochs = 0
            _atomic_save({
                "model_config": model.cfg.to_dict(),
                "train_config": cfg.to_dict(),
                "state_dict": model.state_dict(),
                "epoch": epoch,
                "val_f1": val_f1,
            }, checkpoint_path)
        else:
            bad_epochs += 1
        metrics.append({"epoch": epoch,
                        "train_loss": total_loss / len(train_set),
                        "val_f1": val_f1, "improved": improved})
        if bad_epochs > cfg.patience:
            break

    with open(os.path.join(out_dir, "metrics.json"), "w", encoding="utf-8") as fh:
        json.dump(metrics, fh, indent=2)
    if not os.path.exists(checkpoint_path):
        # no epoch improved over -inf is impossible, but keep the contract
        raise RuntimeError("training produced no checkpoint")
    return checkpoint_path, metrics


def load_checkpoint(path: str) -> tuple[BaselineNet, dict]:
    blob = torch.load(path, map_location="cpu", weights_only=False)
    model = BaselineNet(ModelConfig.from_dict(blob["model_config"]))
    model.load_state_dict(blob["state_dict"])
    model.eval()
    return model, blob
