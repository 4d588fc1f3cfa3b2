from .raster import PolygonAnnotation, rasterize_polygons
from .noise import NoiseSpec, inject_noise
from .aircells import ThresholdSpec, extract_air_cells
from .synth import MaskLayout, synthesize_mask
from .encode import one_hot_encode, decode_one_hot

__all__ = [
    "PolygonAnnotation", "rasterize_polygons",
    "NoiseSpec", "inject_noise",
    "ThresholdSpec", "extract_air_cells",
    "MaskLayout", "synthesize_mask",
    "one_hot_encode", "decode_one_hot",
]
