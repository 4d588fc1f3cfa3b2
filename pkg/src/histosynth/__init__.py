"""histosynth: noise-conditioned semantic-mask-to-histology synthesis and
evaluation pipeline."""

__version__ = "0.1.0"
