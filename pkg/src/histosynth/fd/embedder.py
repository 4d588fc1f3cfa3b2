"""Pluggable feature embedders for set-similarity evaluation."""
from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

from ..labels import RgbImage


@runtime_checkable
class FeatureEmbedder(Protocol):
    name: str
    dim: int
    deterministic: bool

    def embed(self, images: list[RgbImage]) -> np.ndarray:
        """Map images to an (N, dim) feature matrix."""
        ...


class ToyEmbedder:
    """Deterministic test embedder: block-downsampled pixels plus a local
    gradient-magnitude map, passed through a fixed random projection and tanh.

    The gradient channel makes the embedding sensitive to fine speckle
    texture, not just region color.
    """

    def __init__(self, dim: int = 64, grid: tuple[int, int] = (8, 16), seed: int = 1234):
        self.name = "toy"
        self.dim = dim
        self.deterministic = True
        self.grid = grid
        n_in = grid[0] * grid[1] * 4  # 3 color blocks + 1 gradient block
        rng = np.random.default_rng(seed)
        self.projection = rng.standard_normal((n_in, dim)) / np.sqrt(n_in)

    def _block_mean(self, x: np.ndarray) -> np.ndarray:
        gh, gw = self.grid
        h, w = x.shape[:2]
        if h % gh or w % gw:
            raise ValueError(f"image size {(h, w)} not divisible by embed grid {self.grid}")
        bh, bw = h // gh, w // gw
        v = x.reshape(gh, bh, gw, bw, -1).mean(axis=(1, 3))
        return v.reshape(gh, gw, -1)

    def embed(self, images: list[RgbImage]) -> np.ndarray:
        feats = np.empty((len(images), self.dim))
        for i, img in enumerate(images):
            x = img.values.astype(np.float64) / 255.0
            gray = x.mean(axis=2)
            gy = np.abs(np.diff(gray, axis=0, prepend=gray[:1]))
            gx = np.abs(np.diff(gray, axis=1, prepend=gray[:, :1]))
            grad = gy + gx
            blocks = np.concatenate([self._block_mean(x),
                                     self._block_mean(grad[..., None]) * 4.0], axis=2)
            feats[i] = np.tanh(blocks.ravel() @ self.projection)
        return feats


class ExternalEmbedder:
    """Adapter slot for pretrained deep embedders loaded from a weight file.

    Weight files are not bundled; this class exists so full-scale FD/FID
    evaluation can reuse the same evaluation path.
    """

    def __init__(self, name: str, weights_path: str):
        raise NotImplementedError(
            "external embedder weights are not bundled; plug in a loader here")


_REGISTRY = {"toy": ToyEmbedder}


def get_embedder(name: str, **kwargs) -> FeatureEmbedder:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown embedder {name!r}; known: {sorted(_REGISTRY)}") from None
    return factory(**kwargs)
