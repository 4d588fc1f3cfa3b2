"""One-hot label-map encoding for generator conditioning."""
from __future__ import annotations

import numpy as np

from ..labels import LabelGrid, N_LABELS, POLYGONS, POLYGONS_AIR_CELLS, POLYGONS_NOISE


def one_hot_encode(mask: LabelGrid, n_labels: int = N_LABELS) -> np.ndarray:
    """Encode as an (n_labels, H, W) float32 stack with per-pixel channel sum 1."""
    if mask.labels.max(initial=0) >= n_labels:
        raise ValueError(f"mask contains label >= n_labels ({n_labels})")
    stack = np.zeros((n_labels, mask.height, mask.width), dtype=np.float32)
    rows, cols = np.indices(mask.labels.shape)
    stack[mask.labels, rows, cols] = 1.0
    return stack


def decode_one_hot(stack: np.ndarray, resolution_tag: str | None = None) -> LabelGrid:
    """Inverse of one_hot_encode (argmax over channels)."""
    labels = np.argmax(stack, axis=0).astype(np.uint8)
    if resolution_tag is None:
        from ..labels import AUX_CLASSES, ClassId

        present = set(np.unique(labels).tolist())
        if present & {int(ClassId.AIR), int(ClassId.CELL)}:
            resolution_tag = POLYGONS_AIR_CELLS
        elif int(ClassId.NOISE) in present:
            resolution_tag = POLYGONS_NOISE
        else:
            resolution_tag = POLYGONS
    return LabelGrid(labels, resolution_tag)
