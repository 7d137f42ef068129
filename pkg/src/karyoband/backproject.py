"""Paint a banding pattern back onto a shape mask through a sampling frame."""

import numpy as np

from . import banding, kernels
from .imagecore import BLACK_CODE, WHITE_CODE, BG_CODE, ImageError


def render_banded_mask(bits, mask, frame):
    """Replicate bits[k] along each perpendicular line P_k, then fill the
    remaining foreground pixels with the code of the nearest painted pixel.

    Where lines overlap the last k wins. Output codes: 0 black band,
    127 white band, 255 background.
    """
    bits = np.asarray(bits)
    if len(bits) != frame.K:
        raise ImageError(f"pattern length {len(bits)} != frame K {frame.K}")
    out = np.full(mask.shape, BG_CODE, dtype=np.uint8)
    for k, line in enumerate(frame.lines):
        if not mask[line[:, 0], line[:, 1]].all():
            raise ImageError("frame line leaves the mask foreground")
        out[line[:, 0], line[:, 1]] = BLACK_CODE if bits[k] else WHITE_CODE
    holes = mask & (out == BG_CODE)
    if holes.any():
        painted = np.argwhere(mask & (out != BG_CODE))  # row-major: lexicographic
        unpainted = np.argwhere(holes)
        out[holes] = kernels.nearest_fill(out, unpainted, painted)
    return out


def build_pair(image, **extract_kwargs):
    """(banded mask, grayscale image) for one chromosome, sharing one frame."""
    bits, mask, frame = banding.extract_banding_pattern(image, **extract_kwargs)
    return render_banded_mask(bits, mask, frame), image


def pair_image(banded, gray):
    """Side-by-side [mask | photo] layout of size H x 2W."""
    if banded.shape != gray.shape:
        raise ImageError("mask and image dimensions differ")
    return np.hstack([banded, gray])


def split_pair(pair):
    h, w2 = pair.shape
    if w2 % 2:
        raise ImageError("paired image width must be even")
    return pair[:, :w2 // 2], pair[:, w2 // 2:]
