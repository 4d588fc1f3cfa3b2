"""Training hyper-parameters and the constant-then-linear-decay lr schedule."""
from __future__ import annotations

from dataclasses import dataclass, field

from .networks import DiscriminatorConfig, GeneratorConfig


@dataclass
class TrainConfig:
    lr: float = 2e-4
    beta1: float = 0.5
    beta2: float = 0.999
    batch_size: int = 1
    epochs_constant: int = 500
    epochs_decay: int = 200
    lambda_fm: float = 1.0
    init_std: float = 0.02
    seed: int = 0
    gan_mode_g: str = "BCE"    # generator adversarial term
    gan_mode_d: str = "LSGAN"  # discriminator term (squared error)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    discriminator: DiscriminatorConfig = field(default_factory=DiscriminatorConfig)

    def __post_init__(self):
        for name in ("lr", "beta1", "beta2", "batch_size", "epochs_constant",
                     "epochs_decay", "lambda_fm", "init_std"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def total_epochs(self) -> int:
        return self.epochs_constant + self.epochs_decay


def lr_at_epoch(config: TrainConfig, epoch: int) -> float:
    """Constant lr for the first epochs_constant epochs, then linear decay to
    exactly zero at the final epoch."""
    if not 0 <= epoch <= config.total_epochs:
        raise ValueError(f"epoch {epoch} outside schedule [0, {config.total_epochs}]")
    if epoch < config.epochs_constant:
        return config.lr
    return config.lr * (config.total_epochs - epoch) / config.epochs_decay
