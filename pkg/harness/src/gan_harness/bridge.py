"""Subprocess bridge to the evaluator CLI and the validation metrics CSV.

All dice / band-count scoring happens in the ``karyoband`` process; this
module only shells out and parses the results, so the two packages agree
on metric definitions by construction.
"""

import csv
import json
import subprocess
from pathlib import Path

VAL_METRICS_FIELDS = ("epoch", "dice_mean", "dice_std", "maenb_mean", "maenb_std")


class BridgeError(RuntimeError):
    pass


def run_evaluate(inputs_dir, fakes_dir, out_csv, evaluator="karyoband",
                 condition="real"):
    """Score a directory of generated images and return the summary dict."""
    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    cmd = [evaluator, "evaluate", "--inputs", str(inputs_dir),
           "--fakes", str(fakes_dir), "--out", str(out_csv),
           "--condition", condition]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise BridgeError(f"evaluator failed: {proc.stderr.strip()}")
    summary_file = out_csv.with_suffix(".summary.json")
    if not summary_file.exists():
        raise BridgeError(f"evaluator produced no summary at {summary_file}")
    return json.loads(summary_file.read_text())


def append_val_metrics(path, epoch, summary):
    """Append one validation row; creates the file with a header."""
    path = Path(path)
    new = not path.exists()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=VAL_METRICS_FIELDS)
        if new:
            writer.writeheader()
        writer.writerow({
            "epoch": epoch,
            "dice_mean": f"{summary['dice']['mean']:.6f}",
            "dice_std": f"{summary['dice']['std']:.6f}",
            "maenb_mean": f"{summary['maenb']['mean']:.6f}",
            "maenb_std": f"{summary['maenb']['std']:.6f}",
        })


def read_val_metrics(path):
    """Read validation rows back as a list of typed dicts."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != VAL_METRICS_FIELDS:
            raise BridgeError(f"unexpected val_metrics schema in {path}")
        for row in reader:
            rows.append({
                "epoch": int(row["epoch"]),
                "dice_mean": float(row["dice_mean"]),
                "dice_std": float(row["dice_std"]),
                "maenb_mean": float(row["maenb_mean"]),
                "maenb_std": float(row["maenb_std"]),
            })
    return rows
