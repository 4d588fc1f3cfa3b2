"""Generator and multiscale patch discriminator architectures."""
from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..labels import N_LABELS


@dataclass
class GeneratorConfig:
    input_labels: int = N_LABELS
    base_channels: int = 32
    n_downsample: int = 2
    n_resblocks: int = 3
    output_channels: int = 3

    @staticmethod
    def full_scale() -> "GeneratorConfig":
        """Production-size generator; tests use reduced widths for CPU speed."""
        return GeneratorConfig(base_channels=64, n_downsample=4, n_resblocks=9)


@dataclass
class DiscriminatorConfig:
    n_scales: int = 2
    n_layers: int = 3
    base_channels: int = 32
    input_channels: int = N_LABELS + 3  # concatenated (label stack, image)
    use_sigmoid: bool = True  # probability-space scores for BCE mode

    def __post_init__(self):
        if self.n_scales < 1:
            raise ValueError("n_scales must be >= 1")


def init_weights(module: nn.Module, std: float = 0.02) -> None:
    """Gaussian init, mean 0 / given std, on conv and linear weights."""
    for m in module.modules():
        if isinstance(m, (nn.Conv2d, nn.ConvTranspose2d, nn.Linear)):
            nn.init.normal_(m.weight, 0.0, std)
            if m.bias is not None:
                nn.init.zeros_(m.bias)


class ResnetBlock(nn.Module):
    def __init__(self, channels: int):
        super().__init__()
        self.block = nn.Sequential(
            nn.ReflectionPad2d(1),
            nn.Conv2d(channels, channels, 3),
            nn.InstanceNorm2d(channels),
            nn.ReLU(inplace=True),
            nn.ReflectionPad2d(1),
            nn.Conv2d(channels, channels, 3),
            nn.InstanceNorm2d(channels),
        )

    def forward(self, x):
        return x + self.block(x)


class GlobalGenerator(nn.Module):
    """Single global generator: front conv, strided downsampling, residual
    core, symmetric transposed-conv upsampling, tanh output in [-1, 1]."""

    def __init__(self, config: GeneratorConfig):
        super().__init__()
        self.config = config
        c = config.base_channels
        layers: list[nn.Module] = [
            nn.ReflectionPad2d(3),
            nn.Conv2d(config.input_labels, c, 7),
            nn.InstanceNorm2d(c),
            nn.ReLU(inplace=True),
        ]
        for _ in range(config.n_downsample):
            layers += [nn.Conv2d(c, c * 2, 3, stride=2, padding=1),
                       nn.InstanceNorm2d(c * 2), nn.ReLU(inplace=True)]
            c *= 2
        for _ in range(config.n_resblocks):
            layers.append(ResnetBlock(c))
        for _ in range(config.n_downsample):
            layers += [nn.ConvTranspose2d(c, c // 2, 3, stride=2, padding=1,
                                          output_padding=1),
                       nn.InstanceNorm2d(c // 2), nn.ReLU(inplace=True)]
            c //= 2
        layers += [nn.ReflectionPad2d(3), nn.Conv2d(c, config.output_channels, 7),
                   nn.Tanh()]
        self.net = nn.Sequential(*layers)

    def forward(self, label_stack: torch.Tensor) -> torch.Tensor:
        if label_stack.shape[1] != self.config.input_labels:
            raise ValueError(f"expected {self.config.input_labels} label channels, "
                             f"got {label_stack.shape[1]}")
        factor = 2 ** self.config.n_downsample
        h, w = label_stack.shape[-2:]
        if h % factor or w % factor:
            raise ValueError(f"spatial dims {(h, w)} not divisible by {factor}")
        return self.net(label_stack)


class PatchDiscriminator(nn.Module):
    """PatchGAN discriminator exposing intermediate features for the
    feature-matching loss."""

    def __init__(self, config: DiscriminatorConfig):
        super().__init__()
        c_in = config.input_channels
        c = config.base_channels
        blocks = [nn.Sequential(nn.Conv2d(c_in, c, 4, stride=2, padding=2),
                                nn.LeakyReLU(0.2, inplace=True))]
        for i in range(1, config.n_layers):
            c_next = min(c * 2, 512)
            stride = 2 if i < config.n_layers - 1 else 1
            blocks.append(nn.Sequential(
                nn.Conv2d(c, c_next, 4, stride=stride, padding=2),
                nn.InstanceNorm2d(c_next),
                nn.LeakyReLU(0.2, inplace=True)))
            c = c_next
        head = [nn.Conv2d(c, 1, 4, stride=1, padding=2)]
        if config.use_sigmoid:
            head.append(nn.Sigmoid())
        blocks.append(nn.Sequential(*head))
        self.blocks = nn.ModuleList(blocks)

    def forward(self, x: torch.Tensor) -> list[torch.Tensor]:
        outputs = []
        for block in self.blocks:
            x = block(x)
            outputs.append(x)
        return outputs  # [features..., score map]


class MultiscaleDiscriminator(nn.Module):
    """K patch discriminators; scale k consumes the input downsampled by
    2^(k-1)."""

    def __init__(self, config: DiscriminatorConfig):
        super().__init__()
        self.config = config
        self.scales = nn.ModuleList(PatchDiscriminator(config)
                                    for _ in range(config.n_scales))

    def forward(self, label_stack: torch.Tensor, image: torch.Tensor
                ) -> list[list[torch.Tensor]]:
        if label_stack.shape[-2:] != image.shape[-2:]:
            raise ValueError("label stack and image spatial dims differ")
        x = torch.cat([label_stack, image], dim=1)
        results = []
        for k, disc in enumerate(self.scales):
            inp = x if k == 0 else F.avg_pool2d(x, 2 ** k)
            results.append(disc(inp))
        return results

    @staticmethod
    def scores(outputs: list[list[torch.Tensor]]) -> list[torch.Tensor]:
        return [out[-1] for out in outputs]

    @staticmethod
    def features(outputs: list[list[torch.Tensor]]) -> list[list[torch.Tensor]]:
        return [out[:-1] for out in outputs]
