"""Command-line entry point orchestrating the full pipeline."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .config import ConfigError, load_run_config
from .dataset import DatasetManifest, split_dataset
from .labels import (RgbImage, load_image_png, load_mask_png, save_image_png,
                     save_mask_png)
from .masks import (NoiseSpec, ThresholdSpec, MaskLayout, extract_air_cells,
                    inject_noise, one_hot_encode, synthesize_mask)
from .masks.raster import load_annotations, rasterize_polygons


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="histosynth",
                                     description="Semantic-mask-to-histology synthesis pipeline")
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument("--seed", type=int, help="override the run seed")
    sub = parser.add_subparsers(dest="command", required=True)

    mask = sub.add_parser("mask", help="mask engineering").add_subparsers(
        dest="subcommand", required=True)
    p = mask.add_parser("rasterize")
    p.add_argument("--annotations", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out", required=True)
    p = mask.add_parser("noise")
    p.add_argument("--mask", required=True)
    p.add_argument("--mean-distance", type=float, required=True)
    p.add_argument("--out", required=True)
    p = mask.add_parser("aircells")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--air", type=int, default=220)
    p.add_argument("--cell", type=int, default=120)
    p.add_argument("--otsu", action="store_true")
    p.add_argument("--out", required=True)
    p = mask.add_parser("synth")
    p.add_argument("--tps", type=float, required=True)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--out", required=True)

    gan = sub.add_parser("gan", help="translation model").add_subparsers(
        dest="subcommand", required=True)
    p = gan.add_parser("train")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--noise-d", type=float)
    p.add_argument("--resume")
    p = gan.add_parser("synth")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-d", type=float)

    ev = sub.add_parser("eval", help="similarity evaluation").add_subparsers(
        dest="subcommand", required=True)
    p = ev.add_parser("fd")
    p.add_argument("--real", required=True)
    p.add_argument("--synth", required=True)
    p.add_argument("--embedder", default="toy")
    p = ev.add_parser("sweep")
    _add_sweep_args(p)

    p = sub.add_parser("sweep", help="noise-frequency sweep")
    _add_sweep_args(p)

    seg = sub.add_parser("seg", help="segmentation harness").add_subparsers(
        dest="subcommand", required=True)
    p = seg.add_parser("train")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p = seg.add_parser("eval")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p = seg.add_parser("augment-exp")
    p.add_argument("--baseline", required=True)
    p.add_argument("--synth", required=True)
    p.add_argument("--control", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("turing", help="blind-rating service")
    p.add_argument("--store", default="turing_sessions")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)

    p = sub.add_parser("demo", help="tiny end-to-end pipeline run")
    p.add_argument("--out", required=True)
    p.add_argument("--n-pairs", type=int, default=24)
    p.add_argument("--steps", type=int, default=50)

    return parser


def _add_sweep_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", required=True)
    p.add_argument("--freqs", default="2,5,10,15,25,50,100,200")
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--steps-per-epoch", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--embedder", default="toy")


def _load_images(directory: str) -> list[RgbImage]:
    paths = sorted(Path(directory).glob("*.png"))
    if len(paths) < 2:
        raise ValueError(f"{directory}: need at least 2 PNG images")
    return [load_image_png(p) for p in paths]


def _run(args, config) -> int:
    from .gan.checkpoint import load_checkpoint
    from .gan.model import build_model, generate
    from .gan.networks import DiscriminatorConfig, GeneratorConfig
    from .gan.schedule import TrainConfig
    from .gan.trainer import train
    from .fd.embedder import get_embedder
    from .fd.frechet import evaluate_set_similarity
    from .fd.sweep import SweepConfig, noise_frequency_sweep
    from .seg.experiment import augmentation_experiment
    from .seg.trainer import evaluate_on, train_segmenter
    from .seg.unetpp import NestedUNet, SegConfig

    seed = args.seed if args.seed is not None else config["run"]["seed"]
    g = config["gan"]
    train_cfg = TrainConfig(
        lr=g["lr"], beta1=g["beta1"], beta2=g["beta2"], batch_size=g["batch_size"],
        epochs_constant=g["epochs_constant"], epochs_decay=g["epochs_decay"],
        lambda_fm=g["lambda_fm"], init_std=g["init_std"], seed=seed,
        gan_mode_g=g["gan_mode_g"], gan_mode_d=g["gan_mode_d"],
        generator=GeneratorConfig(base_channels=g["base_channels"],
                                  n_downsample=g["n_downsample"],
                                  n_resblocks=g["n_resblocks"]),
        discriminator=DiscriminatorConfig(n_scales=g["n_scales"],
                                          n_layers=g["n_layers"]))
    s = config["seg"]
    seg_cfg = SegConfig(n_classes=s["n_classes"], base_channels=s["base_channels"],
                        depth=s["depth"], lr=s["lr"], epochs=s["epochs"],
                        batch_size=s["batch_size"], seed=seed)

    if args.command == "mask":
        if args.subcommand == "rasterize":
            anns = load_annotations(args.annotations)
            save_mask_png(rasterize_polygons(anns, args.width, args.height), args.out)
        elif args.subcommand == "noise":
            mask = load_mask_png(args.mask)
            save_mask_png(inject_noise(mask, NoiseSpec(args.mean_distance, seed)), args.out)
        elif args.subcommand == "aircells":
            spec = ThresholdSpec(args.air, args.cell, "OTSU" if args.otsu else "FIXED")
            out = extract_air_cells(load_image_png(args.image),
                                    load_mask_png(args.mask), spec)
            save_mask_png(out, args.out)
        elif args.subcommand == "synth":
            mask = synthesize_mask(args.tps, MaskLayout(), args.width, args.height, seed)
            save_mask_png(mask, args.out)
        return 0

    if args.command == "gan":
        if args.subcommand == "train":
            manifest = DatasetManifest.load(args.manifest)
            model = load_checkpoint(args.resume) if args.resume else build_model(train_cfg)
            noise = NoiseSpec(args.noise_d, seed) if args.noise_d else None
            config.echo(args.out)
            train(model, manifest, epochs=args.epochs, out_dir=args.out, noise=noise)
        else:
            model = load_checkpoint(args.checkpoint)
            mask = load_mask_png(args.mask)
            if args.noise_d:
                mask = inject_noise(mask, NoiseSpec(args.noise_d, seed))
            img = generate(model, one_hot_encode(mask))
            save_image_png(RgbImage.from_model_space(img), args.out)
        return 0

    if args.command == "eval" and args.subcommand == "fd":
        embedder = get_embedder(args.embedder)
        fd = evaluate_set_similarity(_load_images(args.real),
                                     _load_images(args.synth), embedder)
        print(json.dumps({"embedder": embedder.name, "fd": fd}))
        return 0

    if args.command == "sweep" or (args.command == "eval" and args.subcommand == "sweep"):
        manifest = DatasetManifest.load(args.manifest)
        train_m, eval_m = split_dataset(manifest, 0.75, seed=seed)
        freqs = [float(f) for f in args.freqs.split(",")]
        sweep_cfg = SweepConfig(frequencies=freqs, epochs=args.epochs,
                                steps_per_epoch=args.steps_per_epoch,
                                seed=seed, train=train_cfg)
        config.echo(args.out)
        report = noise_frequency_sweep(train_m, eval_m,
                                       [get_embedder(args.embedder)],
                                       sweep_cfg, out_dir=args.out)
        print(json.dumps({"optimum": report.optimum}))
        return 0

    if args.command == "seg":
        if args.subcommand == "train":
            manifest = DatasetManifest.load(args.manifest)
            config.echo(args.out)
            train_segmenter(manifest, seg_cfg, out_dir=args.out)
        elif args.subcommand == "eval":
            import torch

            payload = torch.load(args.model, weights_only=False)
            cfg = SegConfig(**payload["config"])
            model = NestedUNet(cfg)
            model.load_state_dict(payload["state"])
            report = evaluate_on(model, DatasetManifest.load(args.manifest),
                                 cfg.n_classes)
            print(json.dumps(report.to_dict(), indent=2))
        else:
            config.echo(args.out)
            result = augmentation_experiment(
                DatasetManifest.load(args.baseline), DatasetManifest.load(args.synth),
                DatasetManifest.load(args.control), DatasetManifest.load(args.test),
                seg_cfg, out_dir=args.out)
            print(json.dumps(result["deltas"], indent=2))
        return 0

    if args.command == "turing":
        import uvicorn

        from .turing.service import build_app

        uvicorn.run(build_app(args.store), host=args.host, port=args.port)
        return 0

    if args.command == "demo":
        return _demo(args, config, train_cfg, seed)

    raise AssertionError(f"unhandled command {args.command}")


def _demo(args, config, train_cfg, seed: int) -> int:
    """Tiny end-to-end run: corpus, noisy masks, short training, FD report."""
    import dataclasses as dc

    from .fd.embedder import get_embedder
    from .fd.frechet import evaluate_set_similarity
    from .fd.sweep import synthesize_set
    from .gan.model import build_model
    from .gan.trainer import train

    out = Path(args.out)
    config.echo(out)
    c = config["corpus"]
    manifest = corpus_mod.generate_corpus(out / "corpus", corpus_mod.CorpusConfig(
        n_pairs=args.n_pairs, width=c["width"], height=c["height"], seed=seed))
    train_m, eval_m = split_dataset(manifest, 0.75, seed=seed)
    d = config["mask"]["mean_distance"]

    cfg = dc.replace(train_cfg, generator=dc.replace(train_cfg.generator, base_channels=16))
    model = build_model(cfg)
    steps_total = args.steps
    train(model, train_m, epochs=1, out_dir=out / "checkpoints",
          noise=NoiseSpec(d, seed), steps_per_epoch=steps_total)

    real = [load_image_png(e.image) for e in eval_m.entries]
    synth = synthesize_set(model, eval_m, d)
    (out / "images").mkdir(exist_ok=True)
    for i, img in enumerate(synth[:8]):
        save_image_png(img, out / "images" / f"synth_{i:02d}.png")
    embedder = get_embedder("toy")
    fd = evaluate_set_similarity(real, synth, embedder)
    (out / "reports").mkdir(exist_ok=True)
    with open(out / "reports" / "fd_report.json", "w", encoding="utf-8") as fh:
        json.dump({"embedder": embedder.name, "mean_distance": d,
                   "steps": steps_total, "fd": fd}, fh, indent=2)
    print(json.dumps({"fd": fd}))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_run_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _run(args, config)
    except Exception as exc:  # runtime failures exit 1 with a diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
