"""Dataset manifests, train/test splitting, and per-mask class statistics."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .labels import ClassId, LabelGrid, N_LABELS


class TpsClass(Enum):
    LOW = "LOW"
    MID = "MID"
    HIGH = "HIGH"


def compute_tps(mask: LabelGrid) -> float:
    """Area-based tumor proportion score: positive / (positive + negative) pixels.

    A mask with no tumor pixels at all scores 0.
    """
    pos = int(np.count_nonzero(mask.labels == ClassId.PDL1_POS))
    neg = int(np.count_nonzero(mask.labels == ClassId.PDL1_NEG))
    if pos + neg == 0:
        return 0.0
    return pos / (pos + neg)


def tps_class(tps: float) -> TpsClass:
    """Band a TPS value into the three clinical classes.

    Bands are half-open, lower-inclusive: [0, 0.01), [0.01, 0.5), [0.5, 1].
    """
    if not 0.0 <= tps <= 1.0:
        raise ValueError(f"tps must be in [0, 1], got {tps}")
    if tps < 0.01:
        return TpsClass.LOW
    if tps < 0.5:
        return TpsClass.MID
    return TpsClass.HIGH


def class_histogram(mask: LabelGrid) -> dict[ClassId, int]:
    """Per-class pixel counts; values sum to width * height."""
    counts = np.bincount(mask.labels.ravel(), minlength=N_LABELS)
    return {cid: int(counts[cid]) for cid in ClassId}


@dataclass
class ManifestEntry:
    image: str
    mask: str
    split: str  # "train" | "test" | "" (unassigned)
    tps: float


@dataclass
class DatasetManifest:
    """Paired image/mask manifest, stored as JSON-lines."""

    entries: list[ManifestEntry] = field(default_factory=list)
    seed: int = 0

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.entries:
                fh.write(json.dumps({"image": e.image, "mask": e.mask,
                                     "split": e.split, "tps": e.tps}) + "\n")

    @staticmethod
    def load(path: str | Path, check_files: bool = True) -> "DatasetManifest":
        entries = []
        base = Path(path).parent
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                e = ManifestEntry(rec["image"], rec["mask"],
                                  rec.get("split", ""), float(rec["tps"]))
                if check_files:
                    for p in (e.image, e.mask):
                        rp = Path(p)
                        if not rp.is_absolute():
                            rp = base / rp
                        if not rp.exists():
                            raise FileNotFoundError(f"manifest references missing file: {p}")
                entries.append(e)
        return DatasetManifest(entries)

    def subset(self, split: str) -> "DatasetManifest":
        return DatasetManifest([e for e in self.entries if e.split == split], self.seed)


def split_dataset(manifest: DatasetManifest, train_fraction: float,
                  stratify_by_tps_class: bool = False,
                  seed: int = 0) -> tuple[DatasetManifest, DatasetManifest]:
    """Deterministic train/test split, optionally stratified by TPS band.

    When stratified, each band's train share is within one item of
    train_fraction.
    """
    if len(manifest.entries) < 2:
        raise ValueError("need at least 2 entries to split")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")

    rng = np.random.default_rng(seed)
    if stratify_by_tps_class:
        strata: dict[TpsClass, list[int]] = {c: [] for c in TpsClass}
        for i, e in enumerate(manifest.entries):
            strata[tps_class(e.tps)].append(i)
        train_idx: set[int] = set()
        for members in strata.values():
            if not members:
                continue
            order = rng.permutation(len(members))
            n_train = int(round(train_fraction * len(members)))
            train_idx.update(members[j] for j in order[:n_train])
    else:
        order = rng.permutation(len(manifest.entries))
        n_train = int(round(train_fraction * len(manifest.entries)))
        train_idx = set(int(i) for i in order[:n_train])

    train, test = [], []
    for i, e in enumerate(manifest.entries):
        tag = "train" if i in train_idx else "test"
        rec = ManifestEntry(e.image, e.mask, tag, e.tps)
        (train if tag == "train" else test).append(rec)
    return DatasetManifest(train, seed), DatasetManifest(test, seed)
