"""Synthetic striped chromosomes for tests, calibration, and toy corpora.

Renders a thick (optionally curved) bar whose cross sections are colored by a
known banding pattern, together with the exact shape mask and banded mask it
was painted from.
"""

from dataclasses import dataclass

import numpy as np

from .imagecore import BLACK_CODE, WHITE_CODE, BG_CODE

DARK = 60
LIGHT = 160
BACKGROUND = 250


@dataclass(frozen=True)
class SynthChromosome:
    image: np.ndarray    # uint8 grayscale
    mask: np.ndarray     # bool shape mask
    banded: np.ndarray   # uint8 {0,127,255} source banded mask
    bits: np.ndarray     # per-axis-pixel pattern actually painted


def random_pattern(rng, length, min_run=4, max_run=14):
    """Alternating runs of random lengths; starts black or white at random."""
    bits = []
    bit = int(rng.integers(0, 2))
    while len(bits) < length:
        run = int(rng.integers(min_run, max_run + 1))
        bits.extend([bit] * run)
        bit = 1 - bit
    return np.asarray(bits[:length], dtype=np.uint8)


def _axis_points(length, curvature, size):
    """Axis sample per unit arc length: straight or a circular arc."""
    t = np.arange(length, dtype=np.float64)
    if abs(curvature) < 1e-9:
        rows = np.zeros(length)
        cols = t.copy()
    else:
        radius = 1.0 / curvature
        ang = t / radius
        rows = radius * (1.0 - np.cos(ang))
        cols = radius * np.sin(ang)
    pts = np.stack([rows, cols], axis=1)
    # center within the canvas
    center = (pts.min(axis=0) + pts.max(axis=0)) / 2.0
    return pts - center + size / 2.0


def render_chromosome(bits, width=16, curvature=0.0, size=128,
                      dark=DARK, light=LIGHT, background=BACKGROUND,
                      noise=0.0, rng=None):
    """Paint `bits` along a bar of the given half-width and curvature.

    Returns a SynthChromosome whose banded mask uses the standard codes.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    length = len(bits)
    pts = _axis_points(length, curvature, size)
    diffs = np.gradient(pts, axis=0)
    tangents = diffs / np.linalg.norm(diffs, axis=1, keepdims=True)
    normals = np.stack([-tangents[:, 1], tangents[:, 0]], axis=1)

    image = np.full((size, size), background, dtype=np.float64)
    banded = np.full((size, size), BG_CODE, dtype=np.uint8)
    mask = np.zeros((size, size), dtype=bool)
    half = width / 2.0
    offsets = np.arange(-half, half + 0.25, 0.25)
    for k in range(length):
        for sub in (0.0, 0.33, 0.66):  # sub-steps close axial gaps on bends
            if k == length - 1 and sub > 0:
                break
            p = pts[k] + sub * (pts[min(k + 1, length - 1)] - pts[k])
            px = p[None, :] + offsets[:, None] * normals[k][None, :]
            rr = np.round(px[:, 0]).astype(int)
            cc = np.round(px[:, 1]).astype(int)
            ok = (rr >= 0) & (rr < size) & (cc >= 0) & (cc < size)
            rr, cc = rr[ok], cc[ok]
            image[rr, cc] = dark if bits[k] else light
            banded[rr, cc] = BLACK_CODE if bits[k] else WHITE_CODE
            mask[rr, cc] = True
    if noise > 0:
        if rng is None:
            rng = np.random.default_rng(0)
        image = image + rng.normal(0.0, noise, image.shape)
    image = np.clip(np.floor(image + 0.5), 0, 255).astype(np.uint8)
    return SynthChromosome(image, mask, banded, bits)


def random_chromosome(rng, size=128, min_run=4, max_run=14, noise=0.0):
    """Random length/width/curvature chromosome with a random pattern."""
    length = int(rng.integers(60, 100))
    width = int(rng.integers(12, 22))
    curvature = float(rng.choice([0.0, rng.uniform(-0.012, 0.012)]))
    bits = random_pattern(rng, length, min_run, max_run)
    return render_chromosome(bits, width=width, curvature=curvature, size=size,
                             noise=noise, rng=rng)
