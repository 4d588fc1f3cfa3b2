"""GanModel bundle: generator, multiscale discriminator, optimizers, epoch."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .networks import (GlobalGenerator, MultiscaleDiscriminator, init_weights)
from .schedule import TrainConfig


@dataclass
class GanModel:
    generator: GlobalGenerator
    discriminator: MultiscaleDiscriminator
    opt_g: torch.optim.Adam
    opt_d: torch.optim.Adam
    config: TrainConfig
    epoch: int = 0


def build_model(config: TrainConfig, device: str = "cpu") -> GanModel:
    torch.manual_seed(config.seed)
    gen = GlobalGenerator(config.generator).to(device)
    disc = MultiscaleDiscriminator(config.discriminator).to(device)
    init_weights(gen, config.init_std)
    init_weights(disc, config.init_std)
    opt_g = torch.optim.Adam(gen.parameters(), lr=config.lr,
                             betas=(config.beta1, config.beta2))
    opt_d = torch.optim.Adam(disc.parameters(), lr=config.lr,
                             betas=(config.beta1, config.beta2))
    return GanModel(gen, disc, opt_g, opt_d, config)


def generate(model: GanModel, label_stack: np.ndarray) -> np.ndarray:
    """Run the generator in inference mode on a (C, H, W) one-hot stack.

    Returns a (3, H, W) float32 array in model space [-1, 1].
    """
    model.generator.eval()
    with torch.no_grad():
        x = torch.from_numpy(np.ascontiguousarray(label_stack, dtype=np.float32))
        out = model.generator(x.unsqueeze(0))[0]
    return out.numpy()


def discriminate(model: GanModel, label_stack: np.ndarray, image: np.ndarray
                 ) -> tuple[list[np.ndarray], list[list[np.ndarray]]]:
    """Score a (label stack, image) pair; returns per-scale patch score maps
    and per-scale, per-layer feature maps."""
    model.discriminator.eval()
    with torch.no_grad():
        s = torch.from_numpy(np.ascontiguousarray(label_stack, dtype=np.float32))
        x = torch.from_numpy(np.ascontiguousarray(image, dtype=np.float32))
        outs = model.discriminator(s.unsqueeze(0), x.unsqueeze(0))
    scores = [o[-1][0].numpy() for o in outs]
    features = [[f[0].numpy() for f in o[:-1]] for o in outs]
    return scores, features
