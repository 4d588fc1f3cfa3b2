"""Grayscale-threshold extraction of air and cell pixels from RGB tiles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..labels import ClassId, LabelGrid, POLYGONS_AIR_CELLS, RgbImage

DEFAULT_AIR_THRESHOLD = 220
DEFAULT_CELL_THRESHOLD = 120


@dataclass
class ThresholdSpec:
    """Air/cell grayscale thresholds. FIXED uses the given levels; OTSU
    derives both from the image histogram (3-class multi-Otsu)."""

    air_threshold: int = DEFAULT_AIR_THRESHOLD
    cell_threshold: int = DEFAULT_CELL_THRESHOLD
    mode: str = "FIXED"

    def __post_init__(self):
        if self.mode not in ("FIXED", "OTSU"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if self.mode == "FIXED" and not self.cell_threshold < self.air_threshold:
            raise ValueError("cell_threshold must be below air_threshold")


def to_grayscale(image: RgbImage) -> np.ndarray:
    """Rec.601 luma, rounded to uint8."""
    rgb = image.values.astype(np.float64)
    g = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.round(g).astype(np.uint8)


def _otsu_thresholds(gray: np.ndarray) -> tuple[int, int]:
    from skimage.filters import threshold_multiotsu

    lo, hi = threshold_multiotsu(gray, classes=3)
    return int(hi), int(lo)


def extract_air_cells(image: RgbImage, base: LabelGrid,
                      thresholds: ThresholdSpec) -> LabelGrid:
    """Overlay AIR (bright) and CELL (dark) labels onto a base mask."""
    if (image.height, image.width) != (base.height, base.width):
        raise ValueError("image and mask dimensions differ")
    gray = to_grayscale(image)
    if thresholds.mode == "OTSU":
        air_t, cell_t = _otsu_thresholds(gray)
    else:
        air_t, cell_t = thresholds.air_threshold, thresholds.cell_threshold
    out = base.labels.copy()
    out[gray > air_t] = int(ClassId.AIR)
    out[gray < cell_t] = int(ClassId.CELL)
    return LabelGrid(out, POLYGONS_AIR_CELLS)
