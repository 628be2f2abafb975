"""Baseline-labelling network.

Encoder: stem plus the first three residual stages of a 34-layer ResNet
(ImageNet-pretrained when available), frozen. Decoder: four blocks of
3x3 convolution + 2x transposed convolution with group normalization
(G=32) and dropout (p=0.1), channel widths halving to the final
64-channel map. Head: 1x1 convolution and a sigmoid, so the output is a
per-pixel baseline probability at input resolution.
"""
from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F
import torchvision.models as tvm

# stride of the encoder output; 4 decoder blocks of x2 restore it exactly
ENCODER_STRIDE = 16

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


@dataclass
class ModelConfig:
    encoder_weights: str = "imagenet"  # "imagenet", "random", or a .pth path
    groups: int = 32
    dropout: float = 0.1
    decoder_channels: tuple[int, ...] = (128, 64, 64, 64)

    def to_dict(self) -> dict:
        return {"encoder_weights": self.encoder_weights, "groups": self.groups,
                "dropout": self.dropout,
                "decoder_channels": list(self.decoder_channels)}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(encoder_weights=d["encoder_weights"], groups=d["groups"],
                   dropout=d["dropout"],
                   decoder_channels=tuple(d["decoder_channels"]))


def _decoder_block(c_in: int, c_out: int, groups: int, dropout: float) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(c_in, c_out, kernel_size=3, padding=1),
        nn.GroupNorm(groups, c_out),
        nn.ReLU(inplace=True),
        nn.ConvTranspose2d(c_out, c_out, kernel_size=2, stride=2),
        nn.GroupNorm(groups, c_out),
        nn.ReLU(inplace=True),
        nn.Dropout2d(dropout),
    )


class BaselineNet(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        backbone = _load_backbone(cfg.encoder_weights)
        self.encoder = nn.Sequential(
            backbone.conv1, backbone.bn1, backbone.relu, backbone.maxpool,
            backbone.layer1, backbone.layer2, backbone.layer3)
        for p in self.encoder.parameters():
            p.requires_grad_(False)

        channels = (256, *cfg.decoder_channels)
        self.decoder = nn.Sequential(*[
            _decoder_block(channels[i], channels[i + 1], cfg.groups, cfg.dropout)
            for i in range(len(cfg.decoder_channels))])
        self.head = nn.Conv2d(cfg.decoder_channels[-1], 1, kernel_size=1)
        self._init_trainable()

    def _init_trainable(self):
        # He initialization for all trainable conv layers
        for m in [*self.decoder.modules(), self.head]:
            if isinstance(m, (nn.Conv2d, nn.ConvTranspose2d)):
                nn.init.kaiming_normal_(m.weight, nonlinearity="relu")
                if m.bias is not None:
                    nn.init.zeros_(m.bias)

    def train(self, mode: bool = True):
        # the frozen encoder stays in eval mode (fixed batch-norm stats)
        super().train(mode)
        self.encoder.eval()
        return self

    def trainable_parameters(self):
        return (p for p in self.parameters() if p.requires_grad)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """(N, 3, H, W) normalized image -> (N, 1, H, W) probabilities."""
        h, w = x.shape[-2:]
        pad_h = (ENCODER_STRIDE - h % ENCODER_STRIDE) % ENCODER_STRIDE
        pad_w = (ENCODER_STRIDE - w % ENCODER_STRIDE) % ENCODER_STRIDE
        if pad_h or pad_w:
            x = F.pad(x, (0, pad_w, 0, pad_h), mode="replicate")
        features = self.encoder(x)
        out = torch.sigmoid(self.head(self.decoder(features)))
        return out[..., :h, :w]


def _load_backbone(encoder_weights: str) -> tvm.ResNet:
    if encoder_weights == "random":
        return tvm.resnet34(weights=None)
    if encoder_weights == "imagenet":
        try:
            return tvm.resnet34(weights=tvm.ResNet34_Weights.IMAGENET1K_V1)
        except Exception as exc:
            raise RuntimeError(
                "ImageNet weights for the encoder are not available "
                "(download failed and no local cache); pass "
                "encoder_weights='random' or a local .pth path") from exc
    backbone = tvm.resnet34(weights=None)
    state = torch.load(encoder_weights, map_location="cpu", weights_only=True)
    backbone.load_state_dict(state)
    return backbone


def build_model(cfg: ModelConfig | None = None) -> BaselineNet:
    """Construct the network; the encoder reports zero trainable params."""
    model = BaselineNet(cfg or ModelConfig())
    assert sum(p.numel() for p in model.encoder.parameters()
               if p.requires_grad) == 0
    return model


def normalize_image(rgb: "np.ndarray") -> torch.Tensor:  # noqa: F821
    """HxWx3 uint8 -> (1, 3, H, W) float tensor, ImageNet-normalized."""
    import numpy as np

    arr = rgb.astype(np.float32) / 255.0
    arr = (arr - np.asarray(IMAGENET_MEAN, np.float32)) \
        / np.asarray(IMAGENET_STD, np.float32)
    return torch.from_numpy(arr.transpose(2, 0, 1)).unsqueeze(0)
