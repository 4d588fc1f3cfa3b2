"""Procedural mask synthesis with controllable tumor proportion score."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import compute_tps
from ..labels import ClassId, LabelGrid, POLYGONS
from .raster import PolygonAnnotation, rasterize_polygons

TPS_TOLERANCE = 0.02


@dataclass
class MaskLayout:
    """Blob-layout parameters for procedural masks."""

    n_regions: int = 8
    region_scale: float = 0.25  # blob radius as fraction of min(H, W)
    inflammation_fraction: float = 0.2
    other_fraction: float = 0.1

    def __post_init__(self):
        for name in ("inflammation_fraction", "other_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.inflammation_fraction + self.other_fraction > 1.0:
            raise ValueError("inflammation_fraction + other_fraction exceeds 1")
        if self.n_regions < 0:
            raise ValueError("n_regions must be non-negative")


def random_blob(rng: np.random.Generator, cx: float, cy: float,
                radius: float, n_verts: int = 10) -> list[tuple[float, float]]:
    """Star-shaped polygon with jittered radii around a center point."""
    angles = np.sort(rng.uniform(0, 2 * np.pi, n_verts))
    radii = radius * rng.uniform(0.55, 1.0, n_verts)
    return [(cx + r * np.cos(a), cy + r * np.sin(a)) for a, r in zip(angles, radii)]


def random_layout_annotations(layout: MaskLayout, width: int, height: int,
                              rng: np.random.Generator,
                              tumor_class: ClassId = ClassId.PDL1_NEG,
                              ) -> list[PolygonAnnotation]:
    """Scatter blob regions over the grid, classed per the layout fractions."""
    anns = []
    radius = layout.region_scale * min(width, height)
    classes = []
    n_infl = int(round(layout.inflammation_fraction * layout.n_regions))
    n_other = int(round(layout.other_fraction * layout.n_regions))
    n_tumor = max(layout.n_regions - n_infl - n_other, 0)
    classes = ([tumor_class] * n_tumor + [ClassId.INFLAMMATION] * n_infl
               + [ClassId.OTHER] * n_other)
    rng.shuffle(classes)
    for cid in classes:
        cx = rng.uniform(0, width)
        cy = rng.uniform(0, height)
        anns.append(PolygonAnnotation(cid, random_blob(rng, cx, cy, radius)))
    return anns


def synthesize_mask(target_tps: float, layout: MaskLayout,
                    width: int, height: int, seed: int = 0) -> LabelGrid:
    """Generate a random polygon mask whose TPS matches the target.

    Tumor blobs are rasterized as PD-L1 negative, then pixels are flipped to
    positive in a left-to-right sweep until the pixel ratio hits the target.
    """
    if not 0.0 <= target_tps <= 1.0:
        raise ValueError(f"target_tps must be in [0, 1], got {target_tps}")
    layout.__post_init__()
    rng = np.random.default_rng(seed)
    anns = random_layout_annotations(layout, width, height, rng)
    mask = rasterize_polygons(anns, width, height, background=ClassId.OTHER)

    tumor = mask.labels == int(ClassId.PDL1_NEG)
    n_tumor = int(tumor.sum())
    if n_tumor == 0:
        if target_tps > 0:
            raise ValueError("layout produced no tumor area but target_tps > 0")
        return mask

    n_pos = int(round(target_tps * n_tumor))
    if n_pos:
        ys, xs = np.nonzero(tumor)
        order = np.lexsort((ys, xs))  # column-major sweep keeps regions coherent
        sel = (ys[order[:n_pos]], xs[order[:n_pos]])
        mask.labels[sel] = int(ClassId.PDL1_POS)

    achieved = compute_tps(mask)
    if abs(achieved - target_tps) > TPS_TOLERANCE:
        raise ValueError(f"could not reach target TPS {target_tps}: achieved {achieved:.4f}")
    return mask
