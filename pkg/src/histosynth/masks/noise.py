"""Single-pixel noise-label injection at a tuned spatial frequency."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..labels import ClassId, LabelGrid, POLYGONS, POLYGONS_NOISE


@dataclass
class NoiseSpec:
    """Noise density parameterized by the mean distance d between noise
    pixels; per-pixel activation probability is 1/d^2."""

    mean_distance: float
    seed: int = 0

    def __post_init__(self):
        if self.mean_distance < 1:
            raise ValueError(f"mean_distance must be >= 1, got {self.mean_distance}")

    def probability(self, height: int, width: int) -> float:
        # distances beyond the grid diagonal are treated as "no noise"
        if self.mean_distance > math.hypot(height, width):
            return 0.0
        return 1.0 / self.mean_distance ** 2


def inject_noise(mask: LabelGrid, spec: NoiseSpec) -> LabelGrid:
    """Relabel each pixel independently to NOISE with probability 1/d^2.

    Deterministic given the spec seed; only relabeled pixels change.
    """
    if mask.resolution_tag != POLYGONS:
        raise ValueError("inject_noise expects a POLYGONS mask")
    p = spec.probability(mask.height, mask.width)
    out = mask.labels.copy()
    if p > 0:
        rng = np.random.default_rng(spec.seed)
        hits = rng.random(out.shape) < p
        out[hits] = int(ClassId.NOISE)
    return LabelGrid(out, POLYGONS_NOISE)
