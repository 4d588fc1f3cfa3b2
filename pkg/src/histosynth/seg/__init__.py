from .metrics import (ConfusionTensor, SegReport, confusion, miou, wiou,
                      wprecision, wrecall, tobjective, evaluate)
from .unetpp import NestedUNet, SegConfig
from .trainer import train_segmenter, predict
from .experiment import augmentation_experiment

__all__ = [
    "ConfusionTensor", "SegReport", "confusion", "miou", "wiou",
    "wprecision", "wrecall", "tobjective", "evaluate",
    "NestedUNet", "SegConfig", "train_segmenter", "predict",
    "augmentation_experiment",
]
