"""Bundled desk-scale procedural corpus: pseudo-histology tiles with paired
polygon masks. Backs CI runs and directional experiments; no clinical data."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter

from .dataset import DatasetManifest, ManifestEntry, compute_tps
from .labels import ClassId, LabelGrid, RgbImage, save_image_png, save_mask_png
from .masks.synth import MaskLayout, synthesize_mask

# Base stain colors per class (storage space).
CLASS_COLORS = {
    ClassId.OTHER: (232, 218, 228),
    ClassId.PDL1_POS: (168, 108, 82),
    ClassId.PDL1_NEG: (112, 136, 188),
    ClassId.INFLAMMATION: (152, 112, 172),
}
NUCLEUS_COLOR = (58, 38, 72)

# Mean spacing between nucleus speckles, in pixels. The optimal noise-label
# spacing for the generator tracks this scale.
NUCLEUS_SPACING = 8.0


@dataclass
class CorpusConfig:
    n_pairs: int = 200
    width: int = 128
    height: int = 64
    seed: int = 0
    layout: MaskLayout = None

    def __post_init__(self):
        if self.layout is None:
            self.layout = MaskLayout(n_regions=6, region_scale=0.35,
                                     inflammation_fraction=0.2, other_fraction=0.1)


def sample_tps(rng: np.random.Generator) -> float:
    """Bimodal TPS draw: heavy mass at 0 and 1, thinner in the middle."""
    u = rng.random()
    if u < 0.3:
        return 0.0
    if u < 0.65:
        return 1.0
    return float(rng.uniform(0.01, 0.99))


def render_tissue(mask: LabelGrid, seed: int) -> RgbImage:
    """Render a pseudo-histology tile for a polygon mask.

    Each class gets a jittered base stain color, a smooth intensity field,
    and dark nucleus speckles at ~NUCLEUS_SPACING mean spacing; regions the
    generator sees as flat polygons are therefore textured in image space.
    """
    rng = np.random.default_rng(seed)
    h, w = mask.height, mask.width
    img = np.zeros((h, w, 3), dtype=np.float64)

    for cid, color in CLASS_COLORS.items():
        sel = mask.labels == int(cid)
        if not sel.any():
            continue
        jitter = rng.normal(0, 10, 3)
        img[sel] = np.clip(np.array(color) + jitter, 0, 255)

    # smooth low-frequency stain variation
    field = gaussian_filter(rng.normal(0, 1, (h, w)), sigma=6)
    img += (field * 14)[..., None]

    # nucleus speckles in tissue; sparser in background
    p_nuc = 1.0 / NUCLEUS_SPACING ** 2
    tissue = mask.labels != int(ClassId.OTHER)
    hits = rng.random((h, w)) < np.where(tissue, p_nuc, p_nuc / 6)
    nuc = np.clip(np.array(NUCLEUS_COLOR) + rng.normal(0, 6, 3), 0, 255)
    ys, xs = np.nonzero(hits)
    for dy, dx in ((0, 0), (0, 1), (1, 0), (1, 1)):
        yy = np.clip(ys + dy, 0, h - 1)
        xx = np.clip(xs + dx, 0, w - 1)
        img[yy, xx] = nuc

    img += rng.normal(0, 3, (h, w, 3))
    return RgbImage(np.clip(np.round(img), 0, 255).astype(np.uint8))


def generate_corpus(out_dir: str | Path, config: CorpusConfig) -> DatasetManifest:
    """Write a paired (mask, image) corpus plus a JSON-lines manifest."""
    out = Path(out_dir)
    (out / "masks").mkdir(parents=True, exist_ok=True)
    (out / "images").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(config.seed)
    entries = []
    for i in range(config.n_pairs):
        target = sample_tps(rng)
        while True:
            try:
                mask = synthesize_mask(target, config.layout, config.width,
                                       config.height, seed=int(rng.integers(2 ** 31)))
                break
            except ValueError:
                # layout occluded all tumor blobs; redraw
                continue
        image = render_tissue(mask, seed=int(rng.integers(2 ** 31)))
        mask_path = out / "masks" / f"pair_{i:04d}.png"
        img_path = out / "images" / f"pair_{i:04d}.png"
        save_mask_png(mask, mask_path)
        save_image_png(image, img_path)
        entries.append(ManifestEntry(str(img_path), str(mask_path), "", compute_tps(mask)))
    manifest = DatasetManifest(entries, config.seed)
    manifest.save(out / "manifest.jsonl")
    return manifest
