"""Density profile to binary banding pattern.

The profile is lightly smoothed, alternating extrema are detected and pruned
by prominence, band boundaries sit at the half-amplitude crossing between
adjacent extrema, and every band is flattened to its mean density. Flattened
segments are then classified black/white against their neighbors; a plateau
whose neighbors lie on opposite sides (a saddle) is split in two, each half
joining the adjacent band.
"""

import json

import numpy as np
from PIL import Image

from . import medial_axis, density_profile, imagecore
from .imagecore import ImageError

DEFAULT_PROMINENCE = 10.0
DEFAULT_SMOOTH_WINDOW = 3
DEFAULT_POLYLINE_STEP = 5.0
DEFAULT_SPACING = 1.0


def _smooth(p, window):
    if window <= 1 or len(p) == 1:
        return np.asarray(p, dtype=np.float64)
    half = window // 2
    out = np.empty(len(p), dtype=np.float64)
    for i in range(len(p)):
        lo = max(0, i - half)
        hi = min(len(p), i + half + 1)
        out[i] = p[lo:hi].mean()
    return out


def _alternating_extrema(s):
    """Alternating min/max plateaus of a sequence, endpoints included.

    Returns a list of (start, end, value) with end inclusive.
    """
    # compress plateaus
    starts = [0]
    for i in range(1, len(s)):
        if s[i] != s[starts[-1]]:
            starts.append(i)
    plateaus = []
    for j, st in enumerate(starts):
        en = starts[j + 1] - 1 if j + 1 < len(starts) else len(s) - 1
        plateaus.append((st, en, s[st]))
    if len(plateaus) == 1:
        return []
    ext = [plateaus[0]]
    for j in range(1, len(plateaus) - 1):
        prev_v = plateaus[j - 1][2]
        v = plateaus[j][2]
        next_v = plateaus[j + 1][2]
        if (v > prev_v and v > next_v) or (v < prev_v and v < next_v):
            ext.append(plateaus[j])
    ext.append(plateaus[-1])
    return ext


def _prune_by_prominence(ext, prominence):
    ext = list(ext)
    while len(ext) >= 2:
        diffs = [abs(ext[i + 1][2] - ext[i][2]) for i in range(len(ext) - 1)]
        i = int(np.argmin(diffs))
        if diffs[i] >= prominence:
            break
        # at the ends drop only the outermost element, so a genuine terminal
        # band extremum is not lost to a neighboring noise wiggle
        if i == 0:
            del ext[0]
        elif i == len(ext) - 2:
            del ext[-1]
        else:
            del ext[i:i + 2]
    return ext


def uniformize(profile, prominence=DEFAULT_PROMINENCE, window=DEFAULT_SMOOTH_WINDOW):
    """Flatten each band of a density profile to its mean value."""
    p = np.asarray(profile, dtype=np.float64)
    if len(p) == 0:
        raise ImageError("empty profile")
    s = _smooth(p, window)
    ext = _prune_by_prominence(_alternating_extrema(s), prominence)
    if len(ext) < 2:
        return np.full(len(p), p.mean())
    boundaries = []
    for (st_l, en_l, v_l), (st_r, en_r, v_r) in zip(ext, ext[1:]):
        h = (v_l + v_r) / 2.0
        rising = v_r > v_l
        b = st_r
        for j in range(en_l + 1, st_r + 1):
            if (rising and s[j] >= h) or (not rising and s[j] <= h):
                b = j
                break
        boundaries.append(b)
    edges = [0] + sorted(set(boundaries)) + [len(p)]
    edges = sorted(set(edges))
    out = np.empty(len(p), dtype=np.float64)
    for a, b in zip(edges, edges[1:]):
        out[a:b] = p[a:b].mean()
    return out


def _segments(filtered):
    breaks = np.flatnonzero(np.diff(filtered) != 0) + 1
    edges = np.concatenate([[0], breaks, [len(filtered)]])
    return [(int(a), int(b), float(filtered[a])) for a, b in zip(edges, edges[1:])]


def binarize_pattern(filtered):
    """Classify flattened segments into black (1) and white (0) bands."""
    segs = _segments(np.asarray(filtered, dtype=np.float64))
    n = len(segs)
    bits = np.empty(len(filtered), dtype=np.uint8)
    cls = [None] * n
    saddle = [False] * n
    for i, (a, b, v) in enumerate(segs):
        if n == 1:
            cls[i] = 1  # lone band: chromosomes are dark on light background
            continue
        vl = segs[i - 1][2] if i > 0 else None
        vr = segs[i + 1][2] if i < n - 1 else None
        if vl is not None and vr is not None and (vl < v < vr or vr < v < vl):
            saddle[i] = True
            continue
        neighbors = [x for x in (vl, vr) if x is not None]
        cls[i] = 1 if v < sum(neighbors) / len(neighbors) else 0
    # resolve saddles from already-classified neighbors
    for i in range(n):
        if saddle[i] and cls[i - 1] is None:
            raise ImageError("unresolvable adjacent saddle segments")
    for i, (a, b, v) in enumerate(segs):
        if not saddle[i]:
            bits[a:b] = cls[i]
        else:
            left_cls = cls[i - 1]
            right_cls = cls[i + 1] if cls[i + 1] is not None else 1 - left_cls
            mid = a + (b - a + 1) // 2  # odd length: extra element to the left
            bits[a:mid] = left_cls
            bits[mid:b] = right_cls
    return bits


def extract_banding_pattern(image, *, step=DEFAULT_POLYLINE_STEP,
                            spacing=DEFAULT_SPACING,
                            prominence=DEFAULT_PROMINENCE,
                            window=DEFAULT_SMOOTH_WINDOW):
    """Full extraction: image -> (pattern bits, shape mask, sampling frame)."""
    mask = imagecore.binarize(image)
    skel = medial_axis.skeletonize(mask)
    path = medial_axis.longest_path(skel)
    axis = medial_axis.fit_polyline(path, mask, step=step)
    frame = density_profile.build_frame(axis, mask, spacing=spacing)
    profile = density_profile.sample_profile(image, frame)
    filtered = uniformize(profile, prominence=prominence, window=window)
    bits = binarize_pattern(filtered)
    return bits, mask, frame


def pattern_runs(bits):
    bits = np.asarray(bits)
    breaks = np.flatnonzero(np.diff(bits) != 0) + 1
    edges = np.concatenate([[0], breaks, [len(bits)]])
    return [{"bit": int(bits[a]), "len": int(b - a)} for a, b in zip(edges, edges[1:])]


def pattern_to_json(bits):
    return json.dumps({"length": int(len(bits)), "runs": pattern_runs(bits)})


def pattern_from_json(text):
    d = json.loads(text)
    bits = np.concatenate([
        np.full(run["len"], run["bit"], dtype=np.uint8) for run in d["runs"]
    ]) if d["runs"] else np.zeros(0, dtype=np.uint8)
    if len(bits) != d["length"]:
        raise ImageError("pattern runs do not sum to the stated length")
    return bits


def pattern_to_strip(bits, path):
    """1 x K PNG, black bands at 0 and white bands at 255."""
    strip = np.where(np.asarray(bits) == 1, 0, 255).astype(np.uint8)[None, :]
    Image.fromarray(strip, mode="L").save(path)
