from .embedder import FeatureEmbedder, ToyEmbedder, get_embedder
from .frechet import GaussianStats, fit_gaussian_stats, frechet_distance, evaluate_set_similarity
from .sweep import SweepConfig, SweepReport, noise_frequency_sweep

__all__ = [
    "FeatureEmbedder", "ToyEmbedder", "get_embedder",
    "GaussianStats", "fit_gaussian_stats", "frechet_distance",
    "evaluate_set_similarity",
    "SweepConfig", "SweepReport", "noise_frequency_sweep",
]
