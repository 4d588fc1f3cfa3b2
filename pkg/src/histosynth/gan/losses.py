"""Adversarial and feature-matching losses."""
from __future__ import annotations

import torch

REAL, FAKE = "REAL", "FAKE"
_EPS = 1e-12


def gan_loss(d_outputs: list[torch.Tensor], target: str, mode: str = "BCE") -> torch.Tensor:
    """Adversarial loss over per-scale patch score maps, averaged over
    patches and scales.

    BCE mode treats scores as probabilities; LSGAN mode is squared error to
    targets 1 (real) / 0 (fake).
    """
    if not d_outputs:
        raise ValueError("empty score set")
    if target not in (REAL, FAKE):
        raise ValueError(f"target must be REAL or FAKE, got {target!r}")
    if mode not in ("BCE", "LSGAN"):
        raise ValueError(f"unknown gan loss mode {mode!r}")
    terms = []
    for scores in d_outputs:
        if not torch.isfinite(scores).all():
            raise ValueError("non-finite discriminator scores")
        if mode == "LSGAN":
            t = 1.0 if target == REAL else 0.0
            terms.append(((scores - t) ** 2).mean())
        else:
            s = scores.clamp(_EPS, 1 - _EPS)
            terms.append((-torch.log(s) if target == REAL else -torch.log1p(-s)).mean())
    return torch.stack(terms).mean()


def feature_matching_loss(real_features: list[list[torch.Tensor]],
                          fake_features: list[list[torch.Tensor]]) -> torch.Tensor:
    """Sum over all discriminator layers of the mean absolute feature
    difference (the 1/N_i-weighted L1 norm); zero iff all pairs identical."""
    if len(real_features) != len(fake_features):
        raise ValueError("feature lists not aligned by scale")
    total = None
    for real_scale, fake_scale in zip(real_features, fake_features):
        if len(real_scale) != len(fake_scale):
            raise ValueError("feature lists not aligned by layer")
        for r, f in zip(real_scale, fake_scale):
            if r.shape != f.shape:
                raise ValueError(f"feature shape mismatch: {tuple(r.shape)} vs {tuple(f.shape)}")
            term = (r - f).abs().mean()
            total = term if total is None else total + term
    if total is None:
        raise ValueError("empty feature set")
    return total


def total_generator_objective(adv: torch.Tensor | float, fm: torch.Tensor | float,
                              lambda_fm: float = 1.0):
    """Generator objective: adversarial term plus weighted feature matching."""
    return adv + lambda_fm * fm
