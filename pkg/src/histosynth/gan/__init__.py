from .networks import (GeneratorConfig, DiscriminatorConfig, GlobalGenerator,
                       MultiscaleDiscriminator, init_weights)
from .losses import gan_loss, feature_matching_loss, total_generator_objective
from .schedule import TrainConfig, lr_at_epoch
from .model import GanModel, build_model
from .checkpoint import save_checkpoint, load_checkpoint
from .trainer import train

__all__ = [
    "GeneratorConfig", "DiscriminatorConfig", "GlobalGenerator",
    "MultiscaleDiscriminator", "init_weights",
    "gan_loss", "feature_matching_loss", "total_generator_objective",
    "TrainConfig", "lr_at_epoch",
    "GanModel", "build_model", "save_checkpoint", "load_checkpoint", "train",
]
