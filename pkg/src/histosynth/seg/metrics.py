"""Segmentation metrics: per-image confusion tallies, mIoU and the weighted
variants, and the composite train objective."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..labels import LabelGrid

_EPS = 1e-12


@dataclass
class ConfusionTensor:
    """Per-image, per-class classification elements in pixel counts.

    Arrays are (I, C): tp[i, c] is the true-positive count of class c on
    image i; s[i, c] = tp + fn is the ground-truth class size.
    """

    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    tn: np.ndarray

    @property
    def n_images(self) -> int:
        return self.tp.shape[0]

    @property
    def n_classes(self) -> int:
        return self.tp.shape[1]

    @property
    def s(self) -> np.ndarray:
        return self.tp + self.fn

    @property
    def pixels_per_image(self) -> np.ndarray:
        return self.s.sum(axis=1)

    def merged(self, other: "ConfusionTensor") -> "ConfusionTensor":
        return ConfusionTensor(*(np.concatenate([a, b]) for a, b in
                                 zip((self.tp, self.fp, self.fn, self.tn),
                                     (other.tp, other.fp, other.fn, other.tn))))


def confusion(pred: LabelGrid | np.ndarray, gt: LabelGrid | np.ndarray,
              n_classes: int) -> ConfusionTensor:
    """Exact per-pixel confusion tally for a single image."""
    p = pred.labels if isinstance(pred, LabelGrid) else np.asarray(pred)
    g = gt.labels if isinstance(gt, LabelGrid) else np.asarray(gt)
    if p.shape != g.shape:
        raise ValueError(f"pred/gt dims differ: {p.shape} vs {g.shape}")
    if p.max(initial=0) >= n_classes or g.max(initial=0) >= n_classes:
        raise ValueError("labels exceed n_classes")
    # p_ct: pixels of true class c classified as t
    pmat = np.bincount((g.astype(np.int64) * n_classes + p).ravel(),
                       minlength=n_classes * n_classes).reshape(n_classes, n_classes)
    tp = np.diag(pmat).astype(np.int64)
    fn = pmat.sum(axis=1) - tp
    fp = pmat.sum(axis=0) - tp
    total = p.size
    tn = total - tp - fn - fp
    return ConfusionTensor(tp[None, :], fp[None, :], fn[None, :], tn[None, :])


def stack_confusions(tensors: list[ConfusionTensor]) -> ConfusionTensor:
    out = tensors[0]
    for t in tensors[1:]:
        out = out.merged(t)
    return out


def _iou(ct: ConfusionTensor) -> np.ndarray:
    """Per-image, per-class IoU; a class absent from both pred and gt scores
    1 (the 0/0 case resolved as perfect)."""
    denom = ct.tp + ct.fp + ct.fn
    with np.errstate(invalid="ignore", divide="ignore"):
        iou = np.where(denom > 0, ct.tp / np.maximum(denom, 1), 1.0)
    return iou


def miou(ct: ConfusionTensor) -> float:
    """Unweighted mean IoU over images and classes."""
    return float(_iou(ct).mean())


def _weights(ct: ConfusionTensor) -> np.ndarray:
    """Per-image class weights s_c / S; they sum to one per image."""
    s = ct.s.astype(np.float64)
    return s / np.maximum(s.sum(axis=1, keepdims=True), 1)


def wiou(ct: ConfusionTensor) -> float:
    """Class-size-weighted mean IoU (weights s_c/S, averaged over images)."""
    return float((_weights(ct) * _iou(ct)).sum(axis=1).mean())


def wprecision(ct: ConfusionTensor) -> float:
    denom = ct.tp + ct.fp
    with np.errstate(invalid="ignore", divide="ignore"):
        prec = np.where(denom > 0, ct.tp / np.maximum(denom, 1), 1.0)
    return float((_weights(ct) * prec).sum(axis=1).mean())


def wrecall(ct: ConfusionTensor) -> float:
    denom = ct.tp + ct.fn
    with np.errstate(invalid="ignore", divide="ignore"):
        rec = np.where(denom > 0, ct.tp / np.maximum(denom, 1), 1.0)
    return float((_weights(ct) * rec).sum(axis=1).mean())


def mean_dice(ct: ConfusionTensor) -> float:
    """Dataset-aggregated per-class Dice, averaged over classes."""
    tp = ct.tp.sum(axis=0)
    fp = ct.fp.sum(axis=0)
    fn = ct.fn.sum(axis=0)
    denom = 2 * tp + fp + fn
    dice = np.where(denom > 0, 2 * tp / np.maximum(denom, 1), 1.0)
    return float(dice.mean())


def cross_entropy(probs: np.ndarray, gt: np.ndarray) -> float:
    """Pixel-mean negative log-likelihood of the true class.

    probs: (C, H, W) predicted class probabilities; gt: (H, W) labels.
    """
    probs = np.asarray(probs, dtype=np.float64)
    gt = np.asarray(gt)
    if probs.shape[1:] != gt.shape:
        raise ValueError("probs and gt spatial dims differ")
    rows, cols = np.indices(gt.shape)
    true_p = np.clip(probs[gt, rows, cols], _EPS, None)
    return float(-np.log(true_p).mean())


def tobjective(ct: ConfusionTensor, probs: list[np.ndarray],
               gts: list[np.ndarray]) -> float:
    """Composite objective: reciprocal of (mean Dice minus a quarter of the
    pixel-mean true-class log-probability).

    The log term is negative or zero, so the denominator is mean Dice plus a
    quarter of the cross-entropy; a zero denominator yields +inf.
    """
    ce = float(np.mean([cross_entropy(p, g) for p, g in zip(probs, gts)]))
    denom = mean_dice(ct) + 0.25 * ce
    if abs(denom) < _EPS:
        return math.inf
    return 1.0 / denom


@dataclass
class SegReport:
    miou: float
    wiou: float
    wprecision: float
    wrecall: float
    tobjective: float | None
    per_class_iou: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"miou": self.miou, "wiou": self.wiou,
                "wprecision": self.wprecision, "wrecall": self.wrecall,
                "tobjective": self.tobjective,
                "per_class_iou": self.per_class_iou}


def evaluate(preds: list[np.ndarray], gts: list[np.ndarray], n_classes: int,
             probs: list[np.ndarray] | None = None) -> SegReport:
    """Score a prediction set; tobjective is included when probabilities are
    supplied."""
    ct = stack_confusions([confusion(p, g, n_classes) for p, g in zip(preds, gts)])
    tobj = tobjective(ct, probs, gts) if probs is not None else None
    per_class = _iou(ct).mean(axis=0)
    return SegReport(miou(ct), wiou(ct), wprecision(ct), wrecall(ct), tobj,
                     [float(v) for v in per_class])
