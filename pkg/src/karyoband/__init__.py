"""karyoband: banding-pattern extraction, back-projection and evaluation
for single-chromosome images."""

__version__ = "0.1.0"

from .banding import extract_banding_pattern
from .backproject import render_banded_mask, build_pair
from .perlin import PerlinConfig, perlin_1d, generate_perlin_pattern
from .metrics import dice, maenb

__all__ = [
    "extract_banding_pattern", "render_banded_mask", "build_pair",
    "PerlinConfig", "perlin_1d", "generate_perlin_pattern",
    "dice", "maenb", "__version__",
]
