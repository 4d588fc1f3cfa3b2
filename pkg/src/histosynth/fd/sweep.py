"""Noise-frequency sweep: train one translation model per mean distance and
compare set similarity against real images."""
from __future__ import annotations

import dataclasses
import json
import traceback
from dataclasses import dataclass, field
from pathlib import Path


from ..dataset import DatasetManifest
from ..gan.model import GanModel, build_model, generate
from ..gan.schedule import TrainConfig
from ..gan.trainer import train
from ..labels import RgbImage, load_image_png, load_mask_png
from ..masks.encode import one_hot_encode
from ..masks.noise import NoiseSpec, inject_noise
from .embedder import FeatureEmbedder
from .frechet import evaluate_set_similarity


@dataclass
class SweepConfig:
    frequencies: list[float] = field(default_factory=lambda: [2, 5, 10, 15, 25, 50, 100, 200])
    epochs: int = 3
    steps_per_epoch: int | None = None
    include_polygons_baseline: bool = True
    seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)


@dataclass
class SweepReport:
    records: list[dict]          # per-frequency {mean_distance, fd: {embedder: value}, error}
    optimum: float | None        # argmin mean distance for the primary embedder
    baseline_fd: dict | None     # polygons (no-noise) model FD per embedder
    config_echo: dict

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"records": self.records, "optimum": self.optimum,
                       "baseline_fd": self.baseline_fd,
                       "config_echo": self.config_echo}, fh, indent=2)


def synthesize_set(model: GanModel, manifest: DatasetManifest,
                   noise_d: float | None, noise_seed: int = 10_000) -> list[RgbImage]:
    """Translate every mask in the manifest; noise labels are re-drawn per
    item from noise_seed so the eval set is not the training noise."""
    out = []
    for i, e in enumerate(manifest.entries):
        mask = load_mask_png(e.mask)
        if noise_d is not None:
            mask = inject_noise(mask, NoiseSpec(noise_d, noise_seed + i))
        img = generate(model, one_hot_encode(mask))
        out.append(RgbImage.from_model_space(img))
    return out


def train_and_score(train_manifest: DatasetManifest, eval_manifest: DatasetManifest,
                    noise_d: float | None, config: TrainConfig, epochs: int,
                    embedders: list[FeatureEmbedder],
                    steps_per_epoch: int | None = None,
                    out_dir: str | Path | None = None) -> dict[str, float]:
    """Train one model (with or without noise labels) and return its FD per
    embedder against the real eval images."""
    model = build_model(config)
    noise = NoiseSpec(noise_d, config.seed) if noise_d is not None else None
    train(model, train_manifest, epochs=epochs, out_dir=out_dir, noise=noise,
          steps_per_epoch=steps_per_epoch)
    real = [load_image_png(e.image) for e in eval_manifest.entries]
    synth = synthesize_set(model, eval_manifest, noise_d)
    return {emb.name: evaluate_set_similarity(real, synth, emb) for emb in embedders}


def noise_frequency_sweep(train_manifest: DatasetManifest,
                          eval_manifest: DatasetManifest,
                          embedders: list[FeatureEmbedder],
                          config: SweepConfig,
                          out_dir: str | Path | None = None) -> SweepReport:
    """Train one model per frequency and report FD per embedder, plus the
    argmin frequency. Per-frequency failures are recorded, not fatal."""
    if len(config.frequencies) < 2:
        raise ValueError("sweep needs at least 2 frequencies")
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    primary = embedders[0].name
    records = []
    for d in config.frequencies:
        run_dir = out / f"d_{d:g}" if out is not None else None
        cfg = dataclasses.replace(config.train, seed=config.seed)
        try:
            fd = train_and_score(train_manifest, eval_manifest, d, cfg,
                                 config.epochs, embedders,
                                 steps_per_epoch=config.steps_per_epoch,
                                 out_dir=run_dir)
            records.append({"mean_distance": d, "fd": fd, "error": None})
        except Exception:
            records.append({"mean_distance": d, "fd": None,
                            "error": traceback.format_exc()})

    baseline_fd = None
    if config.include_polygons_baseline:
        cfg = dataclasses.replace(config.train, seed=config.seed)
        run_dir = out / "polygons" if out is not None else None
        try:
            baseline_fd = train_and_score(train_manifest, eval_manifest, None, cfg,
                                          config.epochs, embedders,
                                          steps_per_epoch=config.steps_per_epoch,
                                          out_dir=run_dir)
        except Exception:
            baseline_fd = {"error": traceback.format_exc()}

    ok = [r for r in records if r["fd"] is not None]
    optimum = min(ok, key=lambda r: r["fd"][primary])["mean_distance"] if ok else None
    report = SweepReport(records, optimum, baseline_fd, {
        "seed": config.seed, "epochs": config.epochs,
        "steps_per_epoch": config.steps_per_epoch,
        "frequencies": list(config.frequencies),
        "embedders": [e.name for e in embedders],
        "train": dataclasses.asdict(config.train),
    })
    if out is not None:
        report.save(out / "sweep_report.json")
    return report
