"""Raster primitives shared by the whole pipeline.

Conventions: a grayscale image is a 2D uint8 array, a shape mask is a 2D bool
array, and a banded mask is a 2D uint8 array restricted to the codes
``{0, 127, 255}`` (black band, white band, background).
"""

import numpy as np
from PIL import Image
from scipy import ndimage

from . import kernels

BLACK_CODE = 0
WHITE_CODE = 127
BG_CODE = 255
BANDED_CODES = (BLACK_CODE, WHITE_CODE, BG_CODE)

# BT.709 luma weights
_GRAY_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])

_FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_EIGHT_CONN = np.ones((3, 3), dtype=bool)


class ImageError(ValueError):
    pass


def _round_half_up(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def to_grayscale(image):
    """Collapse a 1- or 3-channel raster to uint8 grayscale (BT.709 luma)."""
    arr = np.asarray(image)
    if arr.ndim == 2:
        return arr.astype(np.uint8, copy=True)
    if arr.ndim == 3 and arr.shape[2] == 1:
        return arr[:, :, 0].astype(np.uint8, copy=True)
    if arr.ndim == 3 and arr.shape[2] == 3:
        lum = arr.astype(np.float64) @ _GRAY_WEIGHTS
        return np.clip(_round_half_up(lum), 0, 255).astype(np.uint8)
    raise ImageError(f"unsupported channel layout: shape {arr.shape}")


def pad_square(image, target, fill=255):
    """Center `image` on a target x target canvas, surplus on bottom/right."""
    h, w = image.shape
    if target < max(h, w):
        raise ImageError(f"pad target {target} smaller than image {h}x{w}")
    top = (target - h) // 2
    left = (target - w) // 2
    out = np.full((target, target), fill, dtype=np.uint8)
    out[top:top + h, left:left + w] = image
    return out


def resize(image, size):
    """Bilinear resize of a square grayscale image to size x size."""
    h, w = image.shape
    if h != w:
        raise ImageError(f"resize expects a square image, got {h}x{w}")
    if size == h:
        return image.copy()
    out = kernels.bilinear_resize(image, size, size)
    return np.clip(_round_half_up(out), 0, 255).astype(np.uint8)


def otsu_threshold(image):
    """Otsu split point t; the darker class is [0, t]."""
    hist = np.bincount(image.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    p = hist / total
    omega = np.cumsum(p)
    mu = np.cumsum(p * np.arange(256))
    mu_t = mu[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = (mu_t * omega - mu) ** 2 / (omega * (1.0 - omega))
    sigma_b = sigma_b[:255]  # t = 255 would leave the upper class empty
    if not np.any(np.isfinite(sigma_b)):
        raise ImageError("degenerate image: single intensity level")
    sigma_b = np.where(np.isfinite(sigma_b), sigma_b, -1.0)
    return int(np.argmax(sigma_b))


def binarize(image):
    """Otsu-threshold foreground mask: darker pixels, largest 4-connected
    component only, interior holes filled."""
    t = otsu_threshold(image)
    fg = image <= t
    labels, n = ndimage.label(fg, structure=_FOUR_CONN)
    if n == 0:
        raise ImageError("no foreground after thresholding")
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    fg = labels == np.argmax(sizes)
    return ndimage.binary_fill_holes(fg, structure=_EIGHT_CONN)


def validate_banded(arr):
    bad = ~np.isin(arr, BANDED_CODES)
    if bad.any():
        raise ImageError(f"banded mask holds {int(bad.sum())} non-code values")


def load_gray(path):
    with Image.open(path) as im:
        if im.mode == "L":
            return np.asarray(im).copy()
        return to_grayscale(np.asarray(im.convert("RGB")))


def save_gray(arr, path):
    Image.fromarray(arr.astype(np.uint8), mode="L").save(path)


def load_mask(path):
    return load_gray(path) > 127


def save_mask(mask, path):
    save_gray(np.where(mask, 255, 0).astype(np.uint8), path)


def load_banded(path):
    arr = load_gray(path)
    validate_banded(arr)
    return arr


def save_banded(arr, path):
    validate_banded(arr)
    save_gray(arr, path)
