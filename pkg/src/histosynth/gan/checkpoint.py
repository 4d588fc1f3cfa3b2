"""Self-describing, byte-stable checkpoint container.

Layout: magic line, 8-byte header length, JSON header (sorted keys, arrays
replaced by indexed placeholders), then the raw array buffers in index order.
JSON plus raw C-order buffers keeps save -> load -> save byte-identical.
"""
from __future__ import annotations

import dataclasses
import json
import struct
from pathlib import Path

import numpy as np
import torch

from .model import GanModel, build_model
from .networks import DiscriminatorConfig, GeneratorConfig
from .schedule import TrainConfig

MAGIC = b"HISTOSYNTH-CKPT\n"
VERSION = 1


def _pack(payload: dict) -> bytes:
    arrays: list[np.ndarray] = []

    def strip(obj):
        if isinstance(obj, np.ndarray):
            arrays.append(np.ascontiguousarray(obj))
            return {"__array__": len(arrays) - 1, "dtype": str(obj.dtype),
                    "shape": list(obj.shape)}
        if isinstance(obj, dict):
            return {str(k): strip(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return {"__seq__": obj.__class__.__name__,
                    "items": [strip(v) for v in obj]}
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.floating,)):
            return float(obj)
        return obj

    header = json.dumps(strip(payload), sort_keys=True).encode()
    parts = [MAGIC, struct.pack("<Q", len(header)), header]
    parts.extend(a.tobytes() for a in arrays)
    return b"".join(parts)


def _unpack(blob: bytes) -> dict:
    if not blob.startswith(MAGIC):
        raise ValueError("not a checkpoint file")
    offset = len(MAGIC)
    (hlen,) = struct.unpack_from("<Q", blob, offset)
    offset += 8
    header = json.loads(blob[offset:offset + hlen])
    cursor = [offset + hlen]

    arrays: dict[int, dict] = {}

    def collect(obj):
        if isinstance(obj, dict):
            if "__array__" in obj:
                arrays[obj["__array__"]] = obj
            elif "__seq__" in obj:
                for v in obj["items"]:
                    collect(v)
            else:
                for v in obj.values():
                    collect(v)

    collect(header)
    decoded: dict[int, np.ndarray] = {}
    for i in sorted(arrays):
        meta = arrays[i]
        dtype = np.dtype(meta["dtype"])
        shape = tuple(meta["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * dtype.itemsize
        decoded[i] = np.frombuffer(blob[cursor[0]:cursor[0] + nbytes],
                                   dtype=dtype).reshape(shape).copy()
        cursor[0] += nbytes

    def restore(obj):
        if isinstance(obj, dict):
            if "__array__" in obj:
                return decoded[obj["__array__"]]
            if "__seq__" in obj:
                seq = [restore(v) for v in obj["items"]]
                return tuple(seq) if obj["__seq__"] == "tuple" else seq
            return {_intkey(k): restore(v) for k, v in obj.items()}
        return obj

    return restore(header)


def _intkey(k: str):
    # optimizer state dicts key per-parameter state by integer
    return int(k) if k.lstrip("-").isdigit() else k


def _to_numpy(obj):
    if isinstance(obj, torch.Tensor):
        return obj.detach().cpu().numpy()
    if isinstance(obj, dict):
        return {k: _to_numpy(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return type(obj)(_to_numpy(v) for v in obj)
    return obj


def _to_torch(obj):
    if isinstance(obj, np.ndarray):
        return torch.from_numpy(obj.copy())
    if isinstance(obj, dict):
        return {k: _to_torch(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return type(obj)(_to_torch(v) for v in obj)
    return obj


def _config_dict(config: TrainConfig) -> dict:
    d = dataclasses.asdict(config)
    return d


def _config_from_dict(d: dict) -> TrainConfig:
    d = dict(d)
    d["generator"] = GeneratorConfig(**d["generator"])
    d["discriminator"] = DiscriminatorConfig(**d["discriminator"])
    return TrainConfig(**d)


def save_checkpoint(model: GanModel, path: str | Path) -> None:
    payload = {
        "version": VERSION,
        "config": _config_dict(model.config),
        "epoch": model.epoch,
        "generator": _to_numpy(model.generator.state_dict()),
        "discriminator": _to_numpy(model.discriminator.state_dict()),
        "opt_g": _to_numpy(model.opt_g.state_dict()),
        "opt_d": _to_numpy(model.opt_d.state_dict()),
    }
    Path(path).write_bytes(_pack(payload))


def load_checkpoint(path: str | Path, device: str = "cpu") -> GanModel:
    try:
        payload = _unpack(Path(path).read_bytes())
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if payload.get("version") != VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {payload.get('version')}")
    config = _config_from_dict(payload["config"])
    model = build_model(config, device=device)
    model.generator.load_state_dict(_to_torch(payload["generator"]))
    model.discriminator.load_state_dict(_to_torch(payload["discriminator"]))
    model.opt_g.load_state_dict(_to_torch(payload["opt_g"]))
    model.opt_d.load_state_dict(_to_torch(payload["opt_d"]))
    model.epoch = payload["epoch"]
    return model
