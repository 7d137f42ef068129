"""Hot per-pixel kernels, numba-compiled by default.

Set ``KARYOBAND_NO_NUMBA=1`` to select the pure-numpy fallback path instead
(same results, no compilation). ``benchmarks/bench_kernels.py`` times both.
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("KARYOBAND_NO_NUMBA", "").lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


# ---------------------------------------------------------------------------
# Zhang-Suen thinning

def _thin_mark_numpy(img, step):
    # img: uint8 {0,1}, zero border guaranteed by caller
    p = img.astype(np.int32)
    c = p[1:-1, 1:-1]
    p2 = p[:-2, 1:-1]   # N
    p3 = p[:-2, 2:]     # NE
    p4 = p[1:-1, 2:]    # E
    p5 = p[2:, 2:]      # SE
    p6 = p[2:, 1:-1]    # S
    p7 = p[2:, :-2]     # SW
    p8 = p[1:-1, :-2]   # W
    p9 = p[:-2, :-2]    # NW
    ring = [p2, p3, p4, p5, p6, p7, p8, p9, p2]
    b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
    a = np.zeros_like(c)
    for i in range(8):
        a += (ring[i] == 0) & (ring[i + 1] == 1)
    if step == 0:
        cond = (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
    else:
        cond = (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
    kill = (c == 1) & (b >= 2) & (b <= 6) & (a == 1) & cond
    out = np.zeros(img.shape, dtype=bool)
    out[1:-1, 1:-1] = kill
    return out


def _thin_pass_loop(img, step, kill):
    h, w = img.shape
    n = 0
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            if img[r, c] == 0:
                continue
            p2 = img[r - 1, c]
            p3 = img[r - 1, c + 1]
            p4 = img[r, c + 1]
            p5 = img[r + 1, c + 1]
            p6 = img[r + 1, c]
            p7 = img[r + 1, c - 1]
            p8 = img[r, c - 1]
            p9 = img[r - 1, c - 1]
            b = int(p2) + p3 + p4 + p5 + p6 + p7 + p8 + p9
            if b < 2 or b > 6:
                continue
            a = 0
            if p2 == 0 and p3 == 1:
                a += 1
            if p3 == 0 and p4 == 1:
                a += 1
            if p4 == 0 and p5 == 1:
                a += 1
            if p5 == 0 and p6 == 1:
                a += 1
            if p6 == 0 and p7 == 1:
                a += 1
            if p7 == 0 and p8 == 1:
                a += 1
            if p8 == 0 and p9 == 1:
                a += 1
            if p9 == 0 and p2 == 1:
                a += 1
            if a != 1:
                continue
            if step == 0:
                if p2 * p4 * p6 != 0 or p4 * p6 * p8 != 0:
                    continue
            else:
                if p2 * p4 * p8 != 0 or p2 * p6 * p8 != 0:
                    continue
            kill[r, c] = True
            n += 1
    return n


if USE_NUMBA:
    _thin_pass_loop = njit(cache=True)(_thin_pass_loop)


def zhang_suen_thin(mask):
    """Thin a boolean mask to a one-pixel-wide 8-connected skeleton."""
    h, w = mask.shape
    img = np.zeros((h + 2, w + 2), dtype=np.uint8)
    img[1:-1, 1:-1] = mask
    while True:
        changed = 0
        for step in (0, 1):
            if USE_NUMBA:
                kill = np.zeros(img.shape, dtype=np.bool_)
                changed += _thin_pass_loop(img, step, kill)
            else:
                kill = _thin_mark_numpy(img, step)
                changed += int(kill.sum())
            img[kill] = 0
        if changed == 0:
            break
    return img[1:-1, 1:-1].astype(bool)


# ---------------------------------------------------------------------------
# Bilinear resize (half-pixel centers, clamped)

def _bilinear_loop(src, out_h, out_w):
    in_h, in_w = src.shape
    out = np.empty((out_h, out_w), dtype=np.float64)
    sr = in_h / out_h
    sc = in_w / out_w
    for r in range(out_h):
        y = (r + 0.5) * sr - 0.5
        if y < 0.0:
            y = 0.0
        if y > in_h - 1:
            y = in_h - 1.0
        y0 = int(y)
        y1 = y0 + 1 if y0 + 1 < in_h else y0
        fy = y - y0
        for c in range(out_w):
            x = (c + 0.5) * sc - 0.5
            if x < 0.0:
                x = 0.0
            if x > in_w - 1:
                x = in_w - 1.0
            x0 = int(x)
            x1 = x0 + 1 if x0 + 1 < in_w else x0
            fx = x - x0
            top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
            bot = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
            out[r, c] = top * (1 - fy) + bot * fy
    return out


if USE_NUMBA:
    _bilinear_loop = njit(cache=True)(_bilinear_loop)


def _bilinear_numpy(src, out_h, out_w):
    in_h, in_w = src.shape
    y = np.clip((np.arange(out_h) + 0.5) * in_h / out_h - 0.5, 0, in_h - 1)
    x = np.clip((np.arange(out_w) + 0.5) * in_w / out_w - 0.5, 0, in_w - 1)
    y0 = y.astype(np.int64)
    x0 = x.astype(np.int64)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    fy = (y - y0)[:, None]
    fx = (x - x0)[None, :]
    top = src[np.ix_(y0, x0)] * (1 - fx) + src[np.ix_(y0, x1)] * fx
    bot = src[np.ix_(y1, x0)] * (1 - fx) + src[np.ix_(y1, x1)] * fx
    return top * (1 - fy) + bot * fy


def bilinear_resize(src, out_h, out_w):
    src = np.ascontiguousarray(src, dtype=np.float64)
    if USE_NUMBA:
        return _bilinear_loop(src, out_h, out_w)
    return _bilinear_numpy(src, out_h, out_w)


# ---------------------------------------------------------------------------
# Nearest-painted-neighbor fill for banded masks

def _fill_loop(codes, unpainted, painted):
    out = np.empty(unpainted.shape[0], dtype=np.uint8)
    for i in range(unpainted.shape[0]):
        ur = unpainted[i, 0]
        uc = unpainted[i, 1]
        best = np.int64(1 << 60)
        code = np.uint8(255)
        for j in range(painted.shape[0]):
            dr = painted[j, 0] - ur
            dc = painted[j, 1] - uc
            d = dr * dr + dc * dc
            if d < best:
                best = d
                code = codes[painted[j, 0], painted[j, 1]]
        out[i] = code
    return out


if USE_NUMBA:
    _fill_loop = njit(cache=True)(_fill_loop)


def _fill_numpy(codes, unpainted, painted):
    # chunk over unpainted rows to bound the distance matrix
    out = np.empty(unpainted.shape[0], dtype=np.uint8)
    pcodes = codes[painted[:, 0], painted[:, 1]]
    for start in range(0, unpainted.shape[0], 512):
        u = unpainted[start:start + 512]
        d = ((u[:, None, :] - painted[None, :, :]) ** 2).sum(axis=2)
        out[start:start + 512] = pcodes[np.argmin(d, axis=1)]
    return out


def nearest_fill(codes, unpainted, painted):
    """Code of the nearest painted pixel for each unpainted pixel.

    `painted` must be in row-major (lexicographic) order; ties in squared
    distance then resolve to the smallest (row, col) source.
    """
    if painted.shape[0] == 0:
        raise ValueError("no painted pixels to fill from")
    unpainted = np.ascontiguousarray(unpainted, dtype=np.int64)
    painted = np.ascontiguousarray(painted, dtype=np.int64)
    if USE_NUMBA:
        return _fill_loop(codes, unpainted, painted)
    return _fill_numpy(codes, unpainted, painted)
