"""Three-arm augmentation experiment: real baseline, real + synthetic, and
real + control-real, scored on a held-out test set."""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path

from ..dataset import DatasetManifest
from .trainer import evaluate_on, train_segmenter
from .unetpp import SegConfig


def _merged(a: DatasetManifest, b: DatasetManifest) -> DatasetManifest:
    return DatasetManifest(list(a.entries) + list(b.entries), a.seed)


def _paths(manifest: DatasetManifest) -> set[str]:
    return {e.image for e in manifest.entries}


def augmentation_experiment(real_train: DatasetManifest,
                            synth_set: DatasetManifest,
                            control_real_set: DatasetManifest,
                            test_set: DatasetManifest,
                            config: SegConfig,
                            out_dir: str | Path | None = None) -> dict:
    """Train the three arms with identical seeds/configs and report their
    metric sets plus deltas against the baseline arm."""
    test_paths = _paths(test_set)
    for name, m in (("real_train", real_train), ("synth_set", synth_set),
                    ("control_real_set", control_real_set)):
        overlap = _paths(m) & test_paths
        if overlap:
            raise ValueError(f"{name} overlaps the test set: {sorted(overlap)[:3]}...")

    arms = {
        "baseline": real_train,
        "real_plus_synth": _merged(real_train, synth_set),
        "real_plus_control": _merged(real_train, control_real_set),
    }
    reports = {}
    config_echo = dataclasses.asdict(config) if dataclasses.is_dataclass(config) \
        else dict(config.__dict__)
    for name, manifest in arms.items():
        arm_dir = Path(out_dir) / name if out_dir is not None else None
        model, _ = train_segmenter(manifest, config, out_dir=arm_dir)
        reports[name] = evaluate_on(model, test_set, config.n_classes)

    base = reports["baseline"]
    result = {
        "config_echo": config_echo,
        "arms": {name: r.to_dict() for name, r in reports.items()},
        "deltas": {
            name: {k: r.to_dict()[k] - base.to_dict()[k]
                   for k in ("miou", "wiou", "wprecision", "wrecall")}
            for name, r in reports.items() if name != "baseline"
        },
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "augmentation_report.json", "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2)
        with open(out / "per_class_iou.csv", "w", encoding="utf-8") as fh:
            fh.write("arm,class,iou\n")
            for name, r in reports.items():
                for c, v in enumerate(r.per_class_iou):
                    fh.write(f"{name},{c},{v}\n")
    return result
