"""Scanline polygon rasterization onto label grids."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..labels import BASE_CLASSES, ClassId, LabelGrid, POLYGONS


class DegeneratePolygonError(ValueError):
    """Raised when an annotation cannot be rasterized (too few vertices or
    zero area); carries the index of the offending annotation."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"annotation {index}: {reason}")
        self.index = index


@dataclass
class PolygonAnnotation:
    """A closed polygon labelled with a base tissue class."""

    class_id: ClassId
    vertices: list[tuple[float, float]]


def _signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _fill_polygon(grid: np.ndarray, verts: np.ndarray, value: int) -> None:
    """Even-odd scanline fill with pixel-center, half-open semantics: a pixel
    (x, y) is inside when its center (x+0.5, y+0.5) is covered."""
    h, w = grid.shape
    y_min = max(0, int(np.floor(verts[:, 1].min() - 0.5)))
    y_max = min(h - 1, int(np.ceil(verts[:, 1].max())))
    n = len(verts)
    for y in range(y_min, y_max + 1):
        yc = y + 0.5
        xs = []
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            if y0 == y1:
                continue
            # half-open in y so shared vertices are counted once
            if min(y0, y1) <= yc < max(y0, y1):
                xs.append(x0 + (yc - y0) * (x1 - x0) / (y1 - y0))
        xs.sort()
        for j in range(0, len(xs) - 1, 2):
            # half-open span [x_enter, x_exit): center x+0.5 must be inside
            lo = int(np.ceil(xs[j] - 0.5))
            hi = int(np.ceil(xs[j + 1] - 0.5))
            lo = max(lo, 0)
            hi = min(hi, w)
            if hi > lo:
                grid[y, lo:hi] = value


def rasterize_polygons(annotations: list[PolygonAnnotation], width: int, height: int,
                       background: ClassId = ClassId.OTHER) -> LabelGrid:
    """Rasterize annotations onto a grid; later annotations overwrite earlier
    ones on overlap, uncovered pixels get the background class."""
    if width <= 0 or height <= 0:
        raise ValueError("grid dimensions must be positive")
    if background not in BASE_CLASSES:
        raise ValueError("background must be a base tissue class")
    grid = np.full((height, width), int(background), dtype=np.uint8)
    for idx, ann in enumerate(annotations):
        if ann.class_id not in BASE_CLASSES:
            raise DegeneratePolygonError(idx, f"class {ann.class_id!r} is not a base tissue class")
        if len(ann.vertices) < 3:
            raise DegeneratePolygonError(idx, "fewer than 3 vertices")
        verts = np.asarray(ann.vertices, dtype=np.float64)
        verts[:, 0] = np.clip(verts[:, 0], 0, width)
        verts[:, 1] = np.clip(verts[:, 1], 0, height)
        if abs(_signed_area(verts)) < 1e-12:
            raise DegeneratePolygonError(idx, "zero area (collinear vertices)")
        _fill_polygon(grid, verts, int(ann.class_id))
    return LabelGrid(grid, POLYGONS)


def load_annotations(path: str | Path) -> list[PolygonAnnotation]:
    """Read annotations from a JSON list of {class, points} records."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return [PolygonAnnotation(ClassId[rec["class"]],
                              [(float(x), float(y)) for x, y in rec["points"]])
            for rec in raw]


def save_annotations(annotations: list[PolygonAnnotation], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([{"class": ann.class_id.name,
                    "points": [[float(x), float(y)] for x, y in ann.vertices]}
                   for ann in annotations], fh, indent=2)
