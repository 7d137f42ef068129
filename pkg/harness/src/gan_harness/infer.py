"""Inference: banded masks -> generated grayscale chromosome images."""

import json
import logging
from pathlib import Path

import numpy as np
import torch

from . import data
from .models import UNetGenerator

log = logging.getLogger(__name__)

BG_CODE = 255


def load_generator(checkpoint, device="cpu"):
    """Rebuild the generator from a checkpoint file."""
    state = torch.load(checkpoint, map_location=device, weights_only=False)
    gen = UNetGenerator(base=state["spec"]["base_channels"]).to(device)
    gen.load_state_dict(state["generator"])
    gen.eval()
    return gen, state


def generate_one(gen, mask, side, device="cpu"):
    """Run one banded mask through the generator; returns a uint8 image."""
    t = data.to_tensor(mask, side).unsqueeze(0).to(device)
    with torch.no_grad():
        out = gen(t)[0]
    img = data.from_tensor(out)
    return data.to_uint8(img)


def infer(checkpoint, masks_dir, out_dir, eval_side=128, device="cpu"):
    """Generate one image per mask PNG, filename-aligned.

    Images are generated at the training side and downscaled to
    ``eval_side`` with the evaluator's bilinear kernel. Masks containing
    only background are still rendered but flagged as degenerate in the
    returned list and in ``degenerate.json``.
    """
    masks_dir = Path(masks_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    gen, state = load_generator(checkpoint, device)
    train_side = state["spec"]["train_side"]
    degenerate = []
    files = sorted(masks_dir.glob("*.png"))
    if not files:
        raise FileNotFoundError(f"no mask images under {masks_dir}")
    for mask_file in files:
        mask = data.load_gray(mask_file)
        if np.all(mask == BG_CODE):
            degenerate.append(mask_file.stem)
            log.warning("mask %s has no foreground; output flagged degenerate",
                        mask_file.name)
        img = generate_one(gen, mask, train_side, device)
        if img.shape != (eval_side, eval_side):
            img = data.to_uint8(data.bilinear_resize(img, eval_side, eval_side))
        data.save_gray(img, out_dir / mask_file.name)
    (out_dir / "degenerate.json").write_text(json.dumps(sorted(degenerate)))
    return degenerate
