"""Alternating D/G training loop with per-epoch checkpoints and a CSV loss log."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
import torch

from ..dataset import DatasetManifest
from ..labels import load_image_png, load_mask_png
from ..masks.encode import one_hot_encode
from ..masks.noise import NoiseSpec, inject_noise
from .checkpoint import save_checkpoint
from .losses import FAKE, REAL, feature_matching_loss, gan_loss, total_generator_objective
from .model import GanModel
from .schedule import TrainConfig, lr_at_epoch


class NanLossError(RuntimeError):
    """Raised when a training loss goes non-finite; the last good checkpoint
    is retained on disk."""


def load_training_pairs(manifest: DatasetManifest,
                        noise: NoiseSpec | None = None
                        ) -> list[tuple[np.ndarray, np.ndarray]]:
    """Decode manifest entries into (one-hot stack, model-space image) pairs,
    optionally injecting noise labels into each mask."""
    pairs = []
    for i, e in enumerate(manifest.entries):
        mask = load_mask_png(e.mask)
        if noise is not None:
            mask = inject_noise(mask, NoiseSpec(noise.mean_distance, noise.seed + i))
        stack = one_hot_encode(mask)
        image = load_image_png(e.image).to_model_space()
        pairs.append((stack, image))
    return pairs


def _set_lr(optimizer: torch.optim.Optimizer, lr: float) -> None:
    for group in optimizer.param_groups:
        group["lr"] = lr


def train_step(model: GanModel, stack: torch.Tensor, image: torch.Tensor
               ) -> dict[str, float]:
    """One D update followed by one G update on a single batch."""
    cfg = model.config
    gen, disc = model.generator, model.discriminator
    gen.train()
    disc.train()

    fake = gen(stack)

    # D step
    model.opt_d.zero_grad()
    real_out = disc(stack, image)
    fake_out = disc(stack, fake.detach())
    d_real = gan_loss(disc.scores(real_out), REAL, cfg.gan_mode_d)
    d_fake = gan_loss(disc.scores(fake_out), FAKE, cfg.gan_mode_d)
    d_loss = 0.5 * (d_real + d_fake)
    d_loss.backward()
    model.opt_d.step()

    # G step
    model.opt_g.zero_grad()
    real_out = disc(stack, image)
    fake_out = disc(stack, fake)
    g_adv = gan_loss(disc.scores(fake_out), REAL, cfg.gan_mode_g)
    g_fm = feature_matching_loss([[f.detach() for f in fs] for fs in disc.features(real_out)],
                                 disc.features(fake_out))
    g_total = total_generator_objective(g_adv, g_fm, cfg.lambda_fm)
    g_total.backward()
    model.opt_g.step()

    record = {"d_loss_real": float(d_real.detach()), "d_loss_fake": float(d_fake.detach()),
              "g_adv": float(g_adv.detach()), "g_fm": float(g_fm.detach())}
    if not all(math.isfinite(v) for v in record.values()):
        raise NanLossError(f"non-finite loss: {record}")
    return record


def train(model: GanModel, manifest: DatasetManifest, epochs: int | None = None,
          out_dir: str | Path | None = None,
          noise: NoiseSpec | None = None,
          checkpoint_every: int = 1,
          steps_per_epoch: int | None = None) -> list[dict]:
    """Train from model.epoch up to `epochs` (defaults to the full schedule).

    Emits loss.csv and per-epoch checkpoints under out_dir; data order is
    reshuffled deterministically each epoch from the config seed.
    """
    cfg = model.config
    if epochs is None:
        epochs = cfg.total_epochs
    pairs = load_training_pairs(manifest, noise)
    if not pairs:
        raise ValueError("empty training manifest")
    tensors = [(torch.from_numpy(s).unsqueeze(0), torch.from_numpy(x).unsqueeze(0))
               for s, x in pairs]

    out = Path(out_dir) if out_dir is not None else None
    log_rows: list[dict] = []
    log_fh = writer = None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        mode = "a" if model.epoch > 0 and (out / "loss.csv").exists() else "w"
        log_fh = open(out / "loss.csv", mode, newline="")
        writer = csv.DictWriter(log_fh, fieldnames=[
            "epoch", "step", "d_loss_real", "d_loss_fake", "g_adv", "g_fm", "lr"])
        if mode == "w":
            writer.writeheader()

    try:
        while model.epoch < epochs:
            lr = lr_at_epoch(cfg, model.epoch)
            _set_lr(model.opt_g, lr)
            _set_lr(model.opt_d, lr)
            order = np.random.default_rng(cfg.seed + model.epoch).permutation(len(tensors))
            if steps_per_epoch is not None:
                order = order[:steps_per_epoch]
            for step, idx in enumerate(order):
                stack, image = tensors[idx]
                try:
                    record = train_step(model, stack, image)
                except NanLossError:
                    if log_fh is not None:
                        log_fh.close()
                    raise
                record.update(epoch=model.epoch, step=step, lr=lr)
                log_rows.append(record)
                if writer is not None:
                    writer.writerow(record)
            model.epoch += 1
            if out is not None and model.epoch % checkpoint_every == 0:
                save_checkpoint(model, out / f"checkpoint_epoch{model.epoch:04d}.pt")
                save_checkpoint(model, out / "checkpoint_latest.pt")
    finally:
        if log_fh is not None:
            log_fh.close()
    return log_rows
