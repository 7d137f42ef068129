"""Loading of side-by-side [mask | photo] training pairs."""

from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset


def bilinear_resize(src, out_h, out_w):
    """Half-pixel-center clamped bilinear resize of a float 2-D array.

    Matches the resize kernel used by the evaluator so that downscaled
    images score without interpolation skew.
    """
    src = np.asarray(src, dtype=np.float64)
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


def to_uint8(img):
    """Clamp a float array to [0, 255] and round half up."""
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def load_gray(path):
    with Image.open(path) as im:
        if im.mode != "L":
            im = im.convert("L")
        return np.asarray(im, dtype=np.uint8)


def save_gray(img, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="L").save(path)


def split_pair(pair):
    """Split an H x 2W side-by-side image into (mask, photo)."""
    h, w2 = pair.shape
    if w2 % 2 != 0:
        raise ValueError(f"pair width {w2} is odd; expected [mask | photo]")
    w = w2 // 2
    return pair[:, :w], pair[:, w:]


def to_tensor(img, side):
    """uint8 image -> float tensor in [-1, 1], resized to side x side."""
    arr = bilinear_resize(np.asarray(img, dtype=np.float64), side, side)
    return torch.from_numpy(arr / 127.5 - 1.0).float().unsqueeze(0)


def from_tensor(t):
    """Generator output in [-1, 1] -> float image in [0, 255]."""
    return (t.detach().cpu().squeeze(0).numpy() + 1.0) * 127.5


class PairDataset(Dataset):
    """Side-by-side pair images under one directory."""

    def __init__(self, pair_dir, side):
        self.side = side
        self.files = sorted(Path(pair_dir).glob("*.png"))
        if not self.files:
            raise FileNotFoundError(f"no pair images under {pair_dir}")

    def __len__(self):
        return len(self.files)

    def __getitem__(self, i):
        mask, photo = split_pair(load_gray(self.files[i]))
        return (to_tensor(mask, self.side), to_tensor(photo, self.side),
                self.files[i].stem)
