"""Command-line surface: train and infer."""

import argparse
import json
import logging
import sys

from . import bridge, infer as infer_mod, train as train_mod
from .spec import TrainSpec


def cmd_train(args):
    kwargs = {k: v for k, v in vars(args).items()
              if k in TrainSpec.__dataclass_fields__ and v is not None}
    spec = TrainSpec(**kwargs)
    summaries = train_mod.train(spec, resume=args.resume)
    if summaries:
        best = max(s["dice"]["mean"] for s in summaries)
        print(json.dumps({"best_val_dice": round(best, 6)}))
    return 0


def cmd_infer(args):
    degenerate = infer_mod.infer(args.checkpoint, args.masks, args.out,
                                 eval_side=args.eval_side, device=args.device)
    print(json.dumps({"generated": True, "degenerate": degenerate}))
    return 0


def cmd_evaluate(args):
    summary = bridge.run_evaluate(args.inputs, args.fakes, args.out,
                                  evaluator=args.evaluator,
                                  condition=args.condition)
    print(json.dumps({"dice_mean": summary["dice"]["mean"],
                      "maenb_mean": summary["maenb"]["mean"]}))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gan-harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the translator on emitted pairs")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--ckpt-dir", required=True)
    for name, typ in (("epochs", int), ("batch-size", int),
                      ("val-interval", int), ("train-side", int),
                      ("eval-side", int), ("lr", float), ("l1-weight", float),
                      ("base-channels", int), ("seed", int)):
        p.add_argument(f"--{name}", type=typ, default=None)
    p.add_argument("--device", default=None)
    p.add_argument("--resume", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("infer", help="generate images from banded masks")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--masks", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--eval-side", type=int, default=128)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("evaluate", help="score generated images via the evaluator")
    p.add_argument("--inputs", required=True)
    p.add_argument("--fakes", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--evaluator", default="karyoband")
    p.add_argument("--condition", default="real")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, bridge.BridgeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
