"""Encoder-decoder with nested dense skip connections (UNet++ family)."""
from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn


@dataclass
class SegConfig:
    n_classes: int = 4
    in_channels: int = 3
    base_channels: int = 16
    depth: int = 3  # number of downsampling stages
    lr: float = 1e-3
    epochs: int = 10
    batch_size: int = 4
    seed: int = 0


class ConvBlock(nn.Module):
    def __init__(self, c_in: int, c_out: int):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(c_in, c_out, 3, padding=1),
            nn.BatchNorm2d(c_out),
            nn.ReLU(inplace=True),
            nn.Conv2d(c_out, c_out, 3, padding=1),
            nn.BatchNorm2d(c_out),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.net(x)


class NestedUNet(nn.Module):
    """Nested U-Net: node X(i, j) takes the dense skips X(i, 0..j-1) plus the
    upsampled X(i+1, j-1). Output head reads X(0, depth)."""

    def __init__(self, config: SegConfig):
        super().__init__()
        self.config = config
        d = config.depth
        chans = [config.base_channels * (2 ** i) for i in range(d + 1)]
        self.pool = nn.MaxPool2d(2)
        self.up = nn.Upsample(scale_factor=2, mode="bilinear", align_corners=False)
        self.nodes = nn.ModuleDict()
        for i in range(d + 1):
            for j in range(d + 1 - i):
                if j == 0:
                    c_in = config.in_channels if i == 0 else chans[i - 1]
                else:
                    c_in = chans[i] * j + chans[i + 1]
                self.nodes[f"x{i}_{j}"] = ConvBlock(c_in, chans[i])
        self.head = nn.Conv2d(chans[0], config.n_classes, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        d = self.config.depth
        grid: dict[tuple[int, int], torch.Tensor] = {}
        for i in range(d + 1):
            inp = x if i == 0 else self.pool(grid[(i - 1, 0)])
            grid[(i, 0)] = self.nodes[f"x{i}_0"](inp)
        for j in range(1, d + 1):
            for i in range(d + 1 - j):
                skips = [grid[(i, k)] for k in range(j)]
                up = self.up(grid[(i + 1, j - 1)])
                grid[(i, j)] = self.nodes[f"x{i}_{j}"](torch.cat(skips + [up], dim=1))
        return self.head(grid[(0, d)])
