"""Command-line surface: extract, mask, perlin, dataset, pairs, evaluate.

Every run writes its resolved configuration (run_config.json) next to its
outputs; re-running with ``--config run_config.json`` reproduces the outputs.
Errors go to stderr as one JSON object and a non-zero exit code.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import (__version__, backproject, banding, dataset, density_profile,
               imagecore, medial_axis, metrics, perlin)
from .imagecore import ImageError

DEFAULTS = {
    "extract": {"step": 5.0, "spacing": 1.0, "prominence": 10.0, "window": 3},
    "mask": {"octaves": 2, "persistence": 0.5, "threshold": 0.0, "perlin_seed": 0},
    "perlin": {"length": 128, "scale": None, "octaves": 2, "persistence": 0.5,
               "threshold": 0.0, "seed": None},
    "dataset": {"seed": None, "size": 128, "min_area": 40},
    "pairs": {"step": 5.0, "spacing": 1.0, "prominence": 10.0, "window": 3},
    "evaluate": {"condition": "real", "dice_mode": "macro"},
}


def _env_seed():
    v = os.environ.get("KARYOBAND_SEED")
    return int(v) if v else None


def _resolve(cmd, args):
    """defaults < --config file < explicit CLI flags."""
    params = dict(DEFAULTS[cmd])
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        params.update(loaded.get("params", loaded))
    for key, val in vars(args).items():
        if key in ("config", "command", "threads", "func") or val is None:
            continue
        params[key] = val
    if "seed" in params and params["seed"] is None:
        params["seed"] = _env_seed() or 0
    return params


def _write_run_config(out_dir, cmd, params):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = {"tool": "karyoband", "version": __version__, "command": cmd,
           "params": params}
    (out_dir / "run_config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True))


def _extract_kwargs(params):
    return {k: params[k] for k in ("step", "spacing", "prominence", "window")
            if k in params}


def cmd_extract(args):
    params = _resolve("extract", args)
    out = Path(params["out"])
    _write_run_config(out, "extract", params)
    image = imagecore.load_gray(params["input"])
    bits, mask, frame = banding.extract_banding_pattern(
        image, **_extract_kwargs(params))
    profile = density_profile.sample_profile(image, frame)
    (out / "bp.json").write_text(banding.pattern_to_json(bits))
    imagecore.save_mask(mask, out / "shape.png")
    (out / "frame.json").write_text(
        json.dumps(density_profile.frame_to_dict(frame)))
    density_profile.profile_to_csv(profile, out / "profile.csv")
    banding.pattern_to_strip(bits, out / "bp_strip.png")
    imagecore.save_banded(backproject.render_banded_mask(bits, mask, frame),
                          out / "banded.png")
    # debug overlay: skeleton and axis samples over the image
    overlay = image.copy()
    skel = medial_axis.skeletonize(mask)
    overlay[skel] = 0
    pts = np.round(frame.points).astype(int)
    overlay[pts[:, 0].clip(0, overlay.shape[0] - 1),
            pts[:, 1].clip(0, overlay.shape[1] - 1)] = 255
    imagecore.save_gray(overlay, out / "overlay.png")
    return 0


def cmd_mask(args):
    params = _resolve("mask", args)
    shape = imagecore.load_mask(params["shape"])
    skel = medial_axis.skeletonize(shape)
    path = medial_axis.longest_path(skel)
    axis = medial_axis.fit_polyline(path, shape)
    frame = density_profile.build_frame(axis, shape)
    if params.get("bp"):
        bits = banding.pattern_from_json(Path(params["bp"]).read_text())
    elif params.get("use_perlin"):
        cfg = perlin.PerlinConfig(
            length=frame.K, octaves=params["octaves"],
            persistence=params["persistence"], threshold=params["threshold"],
            seed=params["perlin_seed"])
        bits, _ = perlin.generate_perlin_pattern(cfg)
    else:
        raise ImageError("either --bp or --perlin is required")
    banded = backproject.render_banded_mask(bits, shape, frame)
    out = Path(params["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    imagecore.save_banded(banded, out)
    _write_run_config(out.parent, "mask", params)
    return 0


def cmd_perlin(args):
    params = _resolve("perlin", args)
    seed = params["seed"] if params["seed"] is not None else (_env_seed() or 0)
    cfg = perlin.PerlinConfig(length=params["length"], scale=params["scale"],
                              octaves=params["octaves"],
                              persistence=params["persistence"],
                              threshold=params["threshold"], seed=seed)
    bits, degenerate = perlin.generate_perlin_pattern(cfg)
    out = Path(params["out"])
    out.mkdir(parents=True, exist_ok=True)
    _write_run_config(out, "perlin", params)
    (out / "bp.json").write_text(banding.pattern_to_json(bits))
    banding.pattern_to_strip(bits, out / "bp_strip.png")
    if degenerate:
        print(json.dumps({"warning": "degenerate pattern"}), file=sys.stderr)
    return 0


def cmd_dataset(args):
    params = _resolve("dataset", args)
    if params.get("seed") is None:
        params["seed"] = _env_seed() or 0
    _write_run_config(params["out"], "dataset", params)
    dataset.build_dataset(params["src"], params["out"], params["seed"],
                          size=params["size"], min_area=params["min_area"])
    return 0


def _pair_one(path, out, kwargs):
    image = imagecore.load_gray(path)
    banded, gray = backproject.build_pair(image, **kwargs)
    imagecore.save_gray(backproject.pair_image(banded, gray),
                        Path(out) / Path(path).name)


def cmd_pairs(args):
    params = _resolve("pairs", args)
    out = Path(params["out"])
    _write_run_config(out, "pairs", params)
    files = sorted(Path(params["src"]).glob("*.png"))
    if not files:
        raise ImageError(f"no PNG images under {params['src']}")
    kwargs = _extract_kwargs(params)
    failures = []

    def work(f):
        try:
            _pair_one(f, out, kwargs)
        except ImageError as exc:
            failures.append({"file": str(f), "error": str(exc)})

    with ThreadPoolExecutor(max_workers=args.threads or os.cpu_count()) as ex:
        list(ex.map(work, files))
    if failures:
        print(json.dumps({"skipped": failures}), file=sys.stderr)
    return 0


def cmd_evaluate(args):
    params = _resolve("evaluate", args)
    inputs = Path(params["inputs"])
    fakes = Path(params["fakes"])
    out_csv = Path(params["out"])
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    classes = {}
    sidecar = inputs / "sidecar.csv"
    if sidecar.exists():
        import csv as _csv
        with open(sidecar, newline="") as fh:
            for row in _csv.DictReader(fh):
                classes[row["id"]] = int(row["class"])
    mask_dir = inputs / "masks" if (inputs / "masks").is_dir() else inputs
    bp_dir = inputs / "bp" if (inputs / "bp").is_dir() else inputs
    pairs = []
    for mask_file in sorted(mask_dir.glob("*.png")):
        sid = mask_file.stem
        fake_file = fakes / f"{sid}.png"
        bp_file = bp_dir / f"{sid}.json"
        if not fake_file.exists() or not bp_file.exists():
            continue
        pairs.append((
            sid, classes.get(sid, 0),
            imagecore.load_banded(mask_file),
            banding.pattern_from_json(bp_file.read_text()),
            imagecore.load_gray(fake_file),
        ))
    records, failures, summary = metrics.evaluate_set(
        pairs, condition=params["condition"])
    metrics.records_to_csv(records, out_csv)
    if summary:
        metrics.summary_to_json(summary, out_csv.with_suffix(".summary.json"))
        metrics.per_class_csv(summary, out_csv.with_name(out_csv.stem + "_per_class.csv"))
    _write_run_config(out_csv.parent, "evaluate", params)
    if failures:
        print(json.dumps({"failures": failures}), file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="karyoband")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run config overriding defaults")
        p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("extract", help="banding pattern from a chromosome image")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    for flag, typ in (("--step", float), ("--spacing", float),
                      ("--prominence", float), ("--window", int)):
        p.add_argument(flag, type=typ, default=None)
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("mask", help="render a banded mask onto a shape")
    p.add_argument("--shape", required=True)
    p.add_argument("--bp", default=None)
    p.add_argument("--perlin", dest="use_perlin", action="store_true", default=None)
    p.add_argument("--perlin-seed", dest="perlin_seed", type=int, default=None)
    p.add_argument("--octaves", type=int, default=None)
    p.add_argument("--persistence", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("perlin", help="generate an abnormal banding pattern")
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--octaves", type=int, default=None)
    p.add_argument("--persistence", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_perlin)

    p = sub.add_parser("dataset", help="build splits, pairs and test_perlin")
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--min-area", dest="min_area", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("pairs", help="emit [mask | photo] pairs for a directory")
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    for flag, typ in (("--step", float), ("--spacing", float),
                      ("--prominence", float), ("--window", int)):
        p.add_argument(flag, type=typ, default=None)
    common(p)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("evaluate", help="score generated images against inputs")
    p.add_argument("--inputs", required=True)
    p.add_argument("--fakes", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--condition", default=None)
    common(p)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ImageError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
