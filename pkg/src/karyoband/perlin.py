"""Coherent 1D fractal gradient noise for abnormal banding patterns.

Gradients are derived from a splitmix64-style hash of (seed, octave, lattice
index), so vectors are reproducible everywhere without a global RNG.
"""

import logging
from dataclasses import dataclass, asdict

import numpy as np

log = logging.getLogger(__name__)

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)


@dataclass(frozen=True)
class PerlinConfig:
    length: int
    scale: float = None  # lattice period in samples; default length / 8
    octaves: int = 2
    persistence: float = 0.5
    seed: int = 0
    threshold: float = 0.0

    def __post_init__(self):
        if self.scale is None:
            object.__setattr__(self, "scale", max(2.0, self.length / 8.0))
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.scale < 2:
            raise ValueError("scale must be >= 2")
        if self.octaves < 1:
            raise ValueError("octaves must be >= 1")
        if not 0 < self.persistence <= 1:
            raise ValueError("persistence must be in (0, 1]")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _splitmix(x):
    with np.errstate(over="ignore"):
        x = (x + _GOLDEN)
        x = (x ^ (x >> _U64(30))) * _MIX1
        x = (x ^ (x >> _U64(27))) * _MIX2
        return x ^ (x >> _U64(31))


def _gradients(seed, octave, indices):
    key = _splitmix(_splitmix(_U64(np.int64(seed).view(np.uint64))) + _U64(octave))
    h = _splitmix(key + indices.astype(np.uint64))
    # top 53 bits -> [0, 1) -> [-1, 1)
    u = (h >> _U64(11)).astype(np.float64) * (1.0 / (1 << 53))
    return 2.0 * u - 1.0


def _smoothstep(t):
    return t * t * (3.0 - 2.0 * t)


def perlin_1d(config):
    """Length-K fractal gradient noise; zero at every lattice point of a
    single-octave configuration."""
    k = np.arange(config.length, dtype=np.float64)
    total = np.zeros(config.length)
    for o in range(config.octaves):
        period = config.scale / (2.0 ** o)
        u = k / period
        i0 = np.floor(u).astype(np.int64)
        f = u - i0
        g0 = _gradients(config.seed, o, i0)
        g1 = _gradients(config.seed, o, i0 + 1)
        t = _smoothstep(f)
        n = (1 - t) * g0 * f + t * g1 * (f - 1.0)
        total += (config.persistence ** o) * n
    return total


def generate_perlin_pattern(config):
    """Threshold the noise into a banding pattern.

    Returns (bits, degenerate). An all-0/all-1 result triggers deterministic
    re-seeding (seed+1) for up to 8 attempts; `degenerate` is True if the
    final pattern is still single-valued.
    """
    cfg = config
    for attempt in range(8):
        noise = perlin_1d(cfg)
        bits = (noise > cfg.threshold).astype(np.uint8)
        if 0 < bits.sum() < len(bits):
            return bits, False
        cfg = PerlinConfig(length=cfg.length, scale=cfg.scale, octaves=cfg.octaves,
                           persistence=cfg.persistence, seed=cfg.seed + 1,
                           threshold=cfg.threshold)
    log.warning("perlin pattern degenerate after 8 re-seeds (seed=%d)", config.seed)
    return bits, True
