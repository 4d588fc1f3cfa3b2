"""Run configuration: strict-schema TOML documents echoed into every artifact
directory."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

# section -> key -> (type, default)
SCHEMA: dict[str, dict[str, tuple]] = {
    "run": {
        "seed": (int, 0),
        "out": (str, "artifacts"),
    },
    "corpus": {
        "n_pairs": (int, 200),
        "width": (int, 128),
        "height": (int, 64),
    },
    "mask": {
        "mean_distance": (float, 15.0),
        "air_threshold": (int, 220),
        "cell_threshold": (int, 120),
        "threshold_mode": (str, "FIXED"),
    },
    "gan": {
        "lr": (float, 2e-4),
        "beta1": (float, 0.5),
        "beta2": (float, 0.999),
        "batch_size": (int, 1),
        "epochs_constant": (int, 500),
        "epochs_decay": (int, 200),
        "lambda_fm": (float, 1.0),
        "init_std": (float, 0.02),
        "base_channels": (int, 32),
        "n_downsample": (int, 2),
        "n_resblocks": (int, 3),
        "n_scales": (int, 2),
        "n_layers": (int, 3),
        "gan_mode_g": (str, "BCE"),
        "gan_mode_d": (str, "LSGAN"),
    },
    "eval": {
        "embedder": (str, "toy"),
        "frequencies": (list, [2.0, 5.0, 10.0, 15.0, 25.0, 50.0, 100.0, 200.0]),
    },
    "seg": {
        "n_classes": (int, 4),
        "base_channels": (int, 16),
        "depth": (int, 3),
        "lr": (float, 1e-3),
        "epochs": (int, 10),
        "batch_size": (int, 4),
    },
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated configuration document plus an environment echo."""

    sections: dict = field(default_factory=dict)

    def __post_init__(self):
        merged = {}
        for section, keys in SCHEMA.items():
            given = self.sections.get(section, {})
            if not isinstance(given, dict):
                raise ConfigError(f"section [{section}] must be a table")
            unknown = set(given) - set(keys)
            if unknown:
                raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
            out = {}
            for key, (typ, default) in keys.items():
                value = given.get(key, default)
                if typ is float and isinstance(value, int):
                    value = float(value)
                if not isinstance(value, typ):
                    raise ConfigError(
                        f"[{section}].{key} must be {typ.__name__}, got {type(value).__name__}")
                out[key] = value
            merged[section] = out
        extra_sections = set(self.sections) - set(SCHEMA)
        if extra_sections:
            raise ConfigError(f"unknown sections: {sorted(extra_sections)}")
        self.sections = merged

    def __getitem__(self, section: str) -> dict:
        return self.sections[section]

    def echo(self, out_dir: str | Path) -> None:
        """Write the exact resolved config into an artifact directory."""
        out = Path(out_dir) / "configs"
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "run_config.json", "w", encoding="utf-8") as fh:
            json.dump({"python": sys.version, "sections": self.sections}, fh, indent=2)


def load_run_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig({})
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return RunConfig(data)
