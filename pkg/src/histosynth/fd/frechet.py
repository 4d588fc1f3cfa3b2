"""Frechet distance between Gaussian fits of embedded image sets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..labels import RgbImage
from .embedder import FeatureEmbedder

_EIG_TOL = 1e-6


@dataclass
class GaussianStats:
    mean: np.ndarray        # (dim,)
    covariance: np.ndarray  # (dim, dim), symmetric PSD up to -_EIG_TOL

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.covariance = np.asarray(self.covariance, dtype=np.float64)
        if self.covariance.shape != (self.mean.size, self.mean.size):
            raise ValueError("covariance shape does not match mean dimension")


def fit_gaussian_stats(features: np.ndarray) -> GaussianStats:
    """Sample mean and unbiased sample covariance, symmetrized."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 2:
        raise ValueError("need an (N >= 2, dim) feature matrix")
    mean = features.mean(axis=0)
    cov = np.cov(features, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    cov = 0.5 * (cov + cov.T)
    return GaussianStats(mean, cov)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root; small negative eigenvalues are clipped,
    genuinely negative ones rejected."""
    vals, vecs = np.linalg.eigh(matrix)
    if vals.min(initial=0.0) < -_EIG_TOL * max(1.0, abs(vals).max()):
        raise ValueError(f"matrix is not PSD (min eigenvalue {vals.min():.3e})")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """Squared Frechet distance between two Gaussians:
    |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^1/2).

    The cross term is computed as the trace of the root of the similar
    symmetric product S_a^1/2 S_b S_a^1/2.
    """
    if a.mean.shape != b.mean.shape:
        raise ValueError("stats dimensions differ")
    for s in (a, b):
        if not (np.isfinite(s.mean).all() and np.isfinite(s.covariance).all()):
            raise ValueError("non-finite Gaussian stats")
    diff = a.mean - b.mean
    a_half = _psd_sqrt(a.covariance)
    inner = a_half @ b.covariance @ a_half
    vals = np.linalg.eigvalsh(0.5 * (inner + inner.T))
    vals = np.clip(vals, 0.0, None)
    tr_cross = 2.0 * np.sqrt(vals).sum()
    d2 = float(diff @ diff + np.trace(a.covariance) + np.trace(b.covariance) - tr_cross)
    return max(d2, 0.0)


def frechet_distance_equal_cov(a: GaussianStats, b: GaussianStats) -> float:
    """Closed-form branch valid when the two covariances are equal: the
    distance reduces to the squared Euclidean mean distance."""
    diff = a.mean - b.mean
    return float(diff @ diff)


def evaluate_set_similarity(real: list[RgbImage], synth: list[RgbImage],
                            embedder: FeatureEmbedder) -> float:
    """Embed both sets, fit Gaussians, return their Frechet distance."""
    if len(real) < 2 or len(synth) < 2:
        raise ValueError("both image sets need at least 2 images")
    stats_r = fit_gaussian_stats(embedder.embed(real))
    stats_s = fit_gaussian_stats(embedder.embed(synth))
    return frechet_distance(stats_r, stats_s)
