"""Segmenter training on the composite Dice + cross-entropy decomposition."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from ..dataset import DatasetManifest
from ..labels import load_image_png, load_mask_png
from .metrics import SegReport, evaluate
from .unetpp import NestedUNet, SegConfig


class NanLossError(RuntimeError):
    pass


def load_seg_pairs(manifest: DatasetManifest) -> list[tuple[np.ndarray, np.ndarray]]:
    pairs = []
    for e in manifest.entries:
        img = load_image_png(e.image).to_model_space()
        mask = load_mask_png(e.mask).labels.astype(np.int64)
        pairs.append((img, mask))
    return pairs


def soft_dice_loss(logits: torch.Tensor, target: torch.Tensor, n_classes: int
                   ) -> torch.Tensor:
    """1 - mean per-class soft Dice over the batch."""
    probs = torch.softmax(logits, dim=1)
    onehot = F.one_hot(target, n_classes).permute(0, 3, 1, 2).float()
    dims = (0, 2, 3)
    inter = (probs * onehot).sum(dims)
    denom = probs.sum(dims) + onehot.sum(dims)
    dice = (2 * inter + 1e-7) / (denom + 1e-7)
    return 1.0 - dice.mean()


def seg_loss(logits: torch.Tensor, target: torch.Tensor, n_classes: int
             ) -> torch.Tensor:
    """Stable decomposition of the composite objective: soft-Dice term plus a
    quarter-weighted cross-entropy."""
    return (soft_dice_loss(logits, target, n_classes)
            + 0.25 * F.cross_entropy(logits, target))


def train_segmenter(manifest: DatasetManifest, config: SegConfig,
                    out_dir: str | Path | None = None) -> tuple[NestedUNet, list[dict]]:
    """Train a nested-U segmenter; fully seeded, per-epoch loss log."""
    if not manifest.entries:
        raise ValueError("empty training manifest")
    torch.manual_seed(config.seed)
    model = NestedUNet(config)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    pairs = load_seg_pairs(manifest)
    images = torch.from_numpy(np.stack([p[0] for p in pairs])).float()
    masks = torch.from_numpy(np.stack([p[1] for p in pairs])).long()

    log = []
    model.train()
    for epoch in range(config.epochs):
        order = np.random.default_rng(config.seed + epoch).permutation(len(pairs))
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(order), config.batch_size):
            idx = order[start:start + config.batch_size]
            logits = model(images[idx])
            loss = seg_loss(logits, masks[idx], config.n_classes)
            if not math.isfinite(float(loss.detach())):
                raise NanLossError(f"non-finite loss at epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            epoch_loss += float(loss.detach())
            n_batches += 1
        log.append({"epoch": epoch, "loss": epoch_loss / n_batches})
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        torch.save({"config": config.__dict__, "state": model.state_dict()},
                   out / "segmenter.pt")
        with open(out / "seg_loss.csv", "w") as fh:
            fh.write("epoch,loss\n")
            for row in log:
                fh.write(f"{row['epoch']},{row['loss']}\n")
    return model, log


def predict(model: NestedUNet, images: list[np.ndarray]
            ) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Predicted labels and class probabilities for model-space images."""
    model.eval()
    preds, probs = [], []
    with torch.no_grad():
        for img in images:
            logits = model(torch.from_numpy(img).float().unsqueeze(0))
            p = torch.softmax(logits, dim=1)[0].numpy()
            probs.append(p)
            preds.append(np.argmax(p, axis=0).astype(np.uint8))
    return preds, probs


def evaluate_on(model: NestedUNet, manifest: DatasetManifest,
                n_classes: int) -> SegReport:
    pairs = load_seg_pairs(manifest)
    preds, probs = predict(model, [p[0] for p in pairs])
    gts = [p[1] for p in pairs]
    return evaluate(preds, gts, n_classes, probs)
