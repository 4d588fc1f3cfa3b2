"""Semantic label classes, label grids, and indexed-PNG mask I/O."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np
from PIL import Image


class ClassId(IntEnum):
    """Pixel classes. Indices 0-3 are base tissue classes; 4-6 are auxiliary
    labels that only appear in augmented masks."""

    OTHER = 0
    PDL1_POS = 1
    PDL1_NEG = 2
    INFLAMMATION = 3
    NOISE = 4
    AIR = 5
    CELL = 6


BASE_CLASSES = (ClassId.OTHER, ClassId.PDL1_POS, ClassId.PDL1_NEG, ClassId.INFLAMMATION)
AUX_CLASSES = (ClassId.NOISE, ClassId.AIR, ClassId.CELL)
N_LABELS = len(ClassId)

# Fixed display palette for indexed-PNG masks (index == ClassId value).
MASK_PALETTE = {
    ClassId.OTHER: (235, 220, 235),
    ClassId.PDL1_POS: (160, 80, 50),
    ClassId.PDL1_NEG: (70, 110, 180),
    ClassId.INFLAMMATION: (120, 60, 140),
    ClassId.NOISE: (0, 0, 0),
    ClassId.AIR: (255, 255, 255),
    ClassId.CELL: (40, 40, 40),
}

POLYGONS = "POLYGONS"
POLYGONS_NOISE = "POLYGONS_NOISE"
POLYGONS_AIR_CELLS = "POLYGONS_AIR_CELLS"
RESOLUTION_TAGS = (POLYGONS, POLYGONS_NOISE, POLYGONS_AIR_CELLS)


@dataclass
class LabelGrid:
    """A 2-D grid of class identifiers (one ClassId per pixel)."""

    labels: np.ndarray  # (H, W) uint8
    resolution_tag: str = POLYGONS

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.uint8)
        if self.labels.ndim != 2:
            raise ValueError(f"labels must be 2-D, got shape {self.labels.shape}")
        if self.resolution_tag not in RESOLUTION_TAGS:
            raise ValueError(f"unknown resolution tag {self.resolution_tag!r}")
        if self.labels.max(initial=0) >= N_LABELS:
            raise ValueError("label values exceed known ClassIds")
        if self.resolution_tag == POLYGONS:
            aux = np.isin(self.labels, [int(c) for c in AUX_CLASSES])
            if aux.any():
                raise ValueError("POLYGONS masks must not contain auxiliary labels")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    def copy(self) -> "LabelGrid":
        return LabelGrid(self.labels.copy(), self.resolution_tag)


@dataclass
class RgbImage:
    """8-bit RGB image in storage space [0, 255]."""

    values: np.ndarray  # (H, W, 3) uint8

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        if self.values.ndim != 3 or self.values.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3), got {self.values.shape}")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def to_model_space(self) -> np.ndarray:
        """Map to float32 (3, H, W) in [-1, 1]."""
        x = self.values.astype(np.float32) / 127.5 - 1.0
        return np.transpose(x, (2, 0, 1))

    @staticmethod
    def from_model_space(x: np.ndarray) -> "RgbImage":
        """Map a (3, H, W) array in [-1, 1] back to storage space."""
        v = np.clip((np.transpose(x, (1, 2, 0)) + 1.0) * 127.5, 0, 255)
        return RgbImage(np.round(v).astype(np.uint8))


def save_mask_png(grid: LabelGrid, path: str | Path) -> None:
    """Write a mask as single-channel indexed PNG with the fixed palette."""
    img = Image.fromarray(grid.labels, mode="P")
    flat = []
    for cid in ClassId:
        flat.extend(MASK_PALETTE[cid])
    img.putpalette(flat + [0] * (768 - len(flat)))
    img.save(path)


def load_mask_png(path: str | Path, resolution_tag: str | None = None) -> LabelGrid:
    """Read an indexed-PNG mask. The tag is inferred from content if omitted."""
    arr = np.array(Image.open(path).convert("P"), dtype=np.uint8)
    if resolution_tag is None:
        present = set(np.unique(arr).tolist())
        if present & {int(ClassId.AIR), int(ClassId.CELL)}:
            resolution_tag = POLYGONS_AIR_CELLS
        elif int(ClassId.NOISE) in present:
            resolution_tag = POLYGONS_NOISE
        else:
            resolution_tag = POLYGONS
    return LabelGrid(arr, resolution_tag)


def save_image_png(image: RgbImage, path: str | Path) -> None:
    Image.fromarray(image.values, mode="RGB").save(path)


def load_image_png(path: str | Path) -> RgbImage:
    return RgbImage(np.array(Image.open(path).convert("RGB"), dtype=np.uint8))
