"""Ingestion, preprocessing, deterministic splits, paired-data emission."""

import csv
import json
import logging
import zlib
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from scipy import ndimage

from . import imagecore, banding, backproject, perlin
from .imagecore import ImageError

log = logging.getLogger(__name__)

SPLIT_FRACTIONS = (0.70, 0.15, 0.15)
TARGET_SIZE = 128

_FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass
class ManifestEntry:
    sample_id: str
    source: str
    group: str              # karyotype id; splits never break a group
    chrom_class: int        # 1..23, or 0 when unlabeled
    split: str              # train | val | test
    perlin: dict = None     # config used for the test_perlin twin


@dataclass
class Manifest:
    seed: int
    preprocess: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)

    def to_json(self):
        return json.dumps(
            {"seed": self.seed, "preprocess": self.preprocess,
             "entries": [asdict(e) for e in self.entries]},
            indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["seed"], d["preprocess"],
                   [ManifestEntry(**e) for e in d["entries"]])

    def by_split(self, split):
        return [e for e in self.entries if e.split == split]


def split_karyotype(image, min_area=40, margin=2):
    """Crop the separable dark components of a karyotype image."""
    try:
        t = imagecore.otsu_threshold(image)
    except ImageError:
        return []
    labels, n = ndimage.label(image <= t, structure=_FOUR_CONN)
    crops = []
    for sl in ndimage.find_objects(labels):
        if sl is None:
            continue
        area = int((labels[sl] > 0).sum())
        if area < min_area:
            continue
        r0 = max(0, sl[0].start - margin)
        r1 = min(image.shape[0], sl[0].stop + margin)
        c0 = max(0, sl[1].start - margin)
        c1 = min(image.shape[1], sl[1].stop + margin)
        crops.append(image[r0:r1, c0:c1].copy())
    return crops


def preprocess(image, pad_target, size=TARGET_SIZE, fill=255):
    """grayscale -> square pad -> bilinear resize, in that order."""
    gray = imagecore.to_grayscale(image)
    padded = imagecore.pad_square(gray, pad_target, fill=fill)
    return imagecore.resize(padded, size)


def make_splits(items, seed, fractions=SPLIT_FRACTIONS):
    """Assign (sample_id, group) items to train/val/test.

    Groups are shuffled with the seed and assigned whole, test first, so a
    group's samples never span splits.
    """
    if len(items) < 3:
        raise ImageError("need at least 3 samples to split")
    groups = {}
    for sample_id, group in items:
        groups.setdefault(group, []).append(sample_id)
    order = sorted(groups)
    rng = np.random.default_rng(seed)
    rng.shuffle(order)
    n = len(items)
    n_test = round(fractions[2] * n)
    n_val = round(fractions[1] * n)
    assignment = {}
    counts = {"test": 0, "val": 0}
    for g in order:
        if counts["test"] < n_test:
            split = "test"
        elif counts["val"] < n_val:
            split = "val"
        else:
            split = "train"
        for sid in groups[g]:
            assignment[sid] = split
        if split in counts:
            counts[split] += len(groups[g])
    return assignment


def sample_perlin_seed(global_seed, sample_id):
    """Stable per-sample seed so test_perlin is reproducible."""
    return (int(global_seed) * 0x1000193 + zlib.crc32(sample_id.encode())) % (1 << 62)


def _discover_sources(src_dir):
    """Two layouts: class subdirectories of single chromosomes, or top-level
    karyotype images with an optional labels.csv (source,index,class)."""
    src = Path(src_dir)
    subdirs = sorted(d for d in src.iterdir() if d.is_dir())
    if subdirs:
        singles = []
        for d in subdirs:
            try:
                cls = 23 if d.name.upper() in ("X", "Y", "XY") else int(d.name)
            except ValueError:
                continue
            for f in sorted(d.glob("*.png")):
                group = f.stem.split("__")[0]
                singles.append((f, cls, group))
        return "singles", singles
    labels = {}
    label_file = src / "labels.csv"
    if label_file.exists():
        with open(label_file, newline="") as fh:
            for row in csv.DictReader(fh):
                labels[(row["source"], int(row["index"]))] = int(row["class"])
    karyotypes = sorted(src.glob("*.png"))
    return "karyotypes", (karyotypes, labels)


def build_dataset(src_dir, out_dir, seed, *, size=TARGET_SIZE, min_area=40,
                  extract_kwargs=None, perlin_octaves=2, perlin_persistence=0.5,
                  perlin_threshold=0.0):
    """Full dataset build: preprocess, split, extract, pair, test_perlin.

    Everything emitted is a pure function of the source files and the seed.
    Returns the manifest; failures are logged and skipped.
    """
    extract_kwargs = extract_kwargs or {}
    out = Path(out_dir)
    for sub in ("images", "masks", "bp", "train", "val", "test",
                "test_perlin/masks", "test_perlin/bp"):
        (out / sub).mkdir(parents=True, exist_ok=True)

    mode, payload = _discover_sources(src_dir)
    raw = []  # (sample_id, source, group, class, gray image)
    if mode == "singles":
        by_group = {}
        for f, cls, group in payload:
            by_group.setdefault(group, []).append((f, cls))
        for group in sorted(by_group):
            imgs = [(f, cls, imagecore.load_gray(f)) for f, cls in by_group[group]]
            pad_target = max(max(im.shape) for _, _, im in imgs)
            for i, (f, cls, im) in enumerate(imgs):
                sid = f"{group}_{i:03d}"
                raw.append((sid, str(f), group, cls, preprocess(im, pad_target, size)))
    else:
        karyotypes, labels = payload
        for f in karyotypes:
            crops = split_karyotype(imagecore.load_gray(f), min_area=min_area)
            if not crops:
                continue
            pad_target = max(max(c.shape) for c in crops)
            for i, crop in enumerate(crops):
                cls = labels.get((f.name, i), 0)
                sid = f"{f.stem}_{i:03d}"
                raw.append((sid, str(f), f.stem, cls, preprocess(crop, pad_target, size)))

    assignment = make_splits([(sid, group) for sid, _, group, _, _ in raw], seed)

    manifest = Manifest(seed=int(seed), preprocess={"size": size, "min_area": min_area})
    rows = []
    for sid, source, group, cls, gray in raw:
        split = assignment[sid]
        try:
            bits, mask, frame = banding.extract_banding_pattern(gray, **extract_kwargs)
            banded = backproject.render_banded_mask(bits, mask, frame)
        except ImageError as exc:
            log.warning("skipping %s: %s", sid, exc)
            continue
        imagecore.save_gray(gray, out / "images" / f"{sid}.png")
        imagecore.save_banded(banded, out / "masks" / f"{sid}.png")
        (out / "bp" / f"{sid}.json").write_text(banding.pattern_to_json(bits))
        imagecore.save_gray(backproject.pair_image(banded, gray),
                            out / split / f"{sid}.png")

        entry = ManifestEntry(sid, source, group, cls, split)
        if split == "test":
            cfg = perlin.PerlinConfig(
                length=frame.K, octaves=perlin_octaves,
                persistence=perlin_persistence, threshold=perlin_threshold,
                seed=sample_perlin_seed(seed, sid))
            pbits, _ = perlin.generate_perlin_pattern(cfg)
            pmask = backproject.render_banded_mask(pbits, mask, frame)
            imagecore.save_banded(pmask, out / "test_perlin" / "masks" / f"{sid}.png")
            (out / "test_perlin" / "bp" / f"{sid}.json").write_text(
                banding.pattern_to_json(pbits))
            entry.perlin = cfg.to_dict()
        manifest.entries.append(entry)
        rows.append((sid, cls, source))

    (out / "manifest.json").write_text(manifest.to_json())
    with open(out / "sidecar.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "class", "source"])
        writer.writerows(rows)
    return manifest
