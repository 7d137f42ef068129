"""Dice over banded masks (background omitted), MAENB, and set evaluation."""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import banding, backproject
from .imagecore import BLACK_CODE, WHITE_CODE, BG_CODE, ImageError


def dice(a, b, mode="macro"):
    """Dice between two banded masks, omitting the background.

    mode="macro" (default): average of per-class dice over {black, white},
    skipping classes absent from both masks. mode="pooled": overlap pooled
    across both band classes.
    """
    if a.shape != b.shape:
        raise ImageError(f"mask shapes differ: {a.shape} vs {b.shape}")
    fa = a != BG_CODE
    fb = b != BG_CODE
    if not fa.any() and not fb.any():
        raise ImageError("both masks are empty")
    if mode == "pooled":
        inter = sum(int(((a == c) & (b == c)).sum()) for c in (BLACK_CODE, WHITE_CODE))
        return 2.0 * inter / (int(fa.sum()) + int(fb.sum()))
    if mode != "macro":
        raise ValueError(f"unknown dice mode {mode!r}")
    scores = []
    for c in (BLACK_CODE, WHITE_CODE):
        na = int((a == c).sum())
        nb = int((b == c).sum())
        if na + nb == 0:
            continue
        inter = int(((a == c) & (b == c)).sum())
        scores.append(2.0 * inter / (na + nb))
    return float(np.mean(scores))


def count_bands(bits):
    """(black runs, white runs) in a pattern."""
    runs = banding.pattern_runs(bits)
    black = sum(1 for r in runs if r["bit"] == 1)
    return black, len(runs) - black


def maenb(input_bits, fake_bits):
    """Normalized absolute difference in black and white band counts.

    Not symmetric: the normalization uses the input pattern's band counts.
    """
    if len(input_bits) == 0 or len(fake_bits) == 0:
        raise ImageError("empty banding pattern")
    ib, iw = count_bands(input_bits)
    fb, fw = count_bands(fake_bits)
    return (abs(ib - fb) + abs(iw - fw)) / (ib + iw)


@dataclass(frozen=True)
class EvalRecord:
    sample_id: str
    chrom_class: int  # 1..23 (23 = X/Y merged); 0 = unlabeled
    dice: float
    maenb: float
    condition: str    # real | perlin | baseline


def _stats(values):
    arr = np.asarray(values, dtype=np.float64)
    return {"mean": float(arr.mean()), "std": float(arr.std()), "n": int(arr.size)}


def summarize(records):
    if not records:
        raise ImageError("no records to summarize")
    out = {
        "dice": _stats([r.dice for r in records]),
        "maenb": _stats([r.maenb for r in records]),
        "per_class": {},
    }
    for cls in sorted({r.chrom_class for r in records}):
        sub = [r for r in records if r.chrom_class == cls]
        out["per_class"][str(cls)] = {
            "dice": _stats([r.dice for r in sub]),
            "maenb": _stats([r.maenb for r in sub]),
        }
    return out


def evaluate_pair(input_mask, input_bits, fake_image, **extract_kwargs):
    """Extract from the generated image, re-render, and score against the
    input banded mask and pattern."""
    fake_bits, fake_mask, fake_frame = banding.extract_banding_pattern(
        fake_image, **extract_kwargs)
    fake_banded = backproject.render_banded_mask(fake_bits, fake_mask, fake_frame)
    return dice(input_mask, fake_banded), maenb(input_bits, fake_bits)


def evaluate_set(pairs, condition="real", **extract_kwargs):
    """Score (sample_id, class, input mask, input bits, fake image) tuples.

    Returns (records, failures, summary); failed extractions are excluded
    from the summary but counted.
    """
    if not pairs:
        raise ImageError("empty evaluation set")
    records, failures = [], []
    for sample_id, cls, input_mask, input_bits, fake_image in pairs:
        try:
            d, m = evaluate_pair(input_mask, input_bits, fake_image, **extract_kwargs)
        except ImageError as exc:
            failures.append({"sample_id": sample_id, "error": str(exc)})
            continue
        records.append(EvalRecord(sample_id, int(cls), d, m, condition))
    summary = summarize(records) if records else None
    return records, failures, summary


def baseline_compare(real_set, perlin_set, condition="baseline"):
    """Compare index-aligned (mask, bits) sets sharing the same shapes."""
    if len(real_set) != len(perlin_set):
        raise ImageError("baseline sets are not index-aligned")
    records = []
    for i, ((rm, rb), (pm, pb)) in enumerate(zip(real_set, perlin_set)):
        records.append(EvalRecord(str(i), 0, dice(rm, pm), maenb(rb, pb), condition))
    return records, summarize(records)


def records_to_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "class", "condition", "dice", "maenb"])
        for r in records:
            writer.writerow([r.sample_id, r.chrom_class, r.condition,
                             f"{r.dice:.6f}", f"{r.maenb:.6f}"])


def records_from_csv(path):
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(EvalRecord(row["id"], int(row["class"]),
                                      float(row["dice"]), float(row["maenb"]),
                                      row["condition"]))
    return records


def per_class_csv(summary, path):
    """Per-class mean/std export (bar-chart data)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class", "dice_mean", "dice_std", "maenb_mean", "maenb_std", "n"])
        for cls, st in summary["per_class"].items():
            writer.writerow([cls, f"{st['dice']['mean']:.6f}", f"{st['dice']['std']:.6f}",
                             f"{st['maenb']['mean']:.6f}", f"{st['maenb']['std']:.6f}",
                             st["dice"]["n"]])


def summary_to_json(summary, path):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
