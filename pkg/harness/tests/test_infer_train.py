import numpy as np
import pytest
import torch

from gan_harness import bridge, data, infer, train
from gan_harness.models import PatchDiscriminator, UNetGenerator
from gan_harness.spec import TrainSpec


def make_checkpoint(path, base=8, train_side=128, seed=0):
    torch.manual_seed(seed)
    spec = TrainSpec(data_dir="unused", ckpt_dir=str(path.parent),
                     train_side=train_side, base_channels=base)
    gen = UNetGenerator(base=base)
    disc = PatchDiscriminator(base=base)
    opt_g = torch.optim.Adam(gen.parameters())
    opt_d = torch.optim.Adam(disc.parameters())
    train.save_checkpoint(path, spec, 0, gen, disc, opt_g, opt_d, -1.0)
    return path


def banded_mask(side=96):
    mask = np.full((side, side), 255, dtype=np.uint8)
    mask[20:70, 30:50] = 127
    mask[30:45, 30:50] = 0
    return mask


class TestInfer:
    def test_alignment_shape_and_degenerate_flag(self, tmp_path):
        ckpt = make_checkpoint(tmp_path / "ck.pt")
        masks = tmp_path / "masks"
        masks.mkdir()
        data.save_gray(banded_mask(), masks / "a.png")
        data.save_gray(np.full((96, 96), 255, np.uint8), masks / "bg_only.png")
        out = tmp_path / "out"
        degenerate = infer.infer(ckpt, masks, out, eval_side=128)
        assert degenerate == ["bg_only"]
        for name in ("a.png", "bg_only.png"):
            img = data.load_gray(out / name)
            assert img.shape == (128, 128)
        assert (out / "degenerate.json").exists()

    def test_deterministic(self, tmp_path):
        ckpt = make_checkpoint(tmp_path / "ck.pt")
        masks = tmp_path / "masks"
        masks.mkdir()
        data.save_gray(banded_mask(), masks / "a.png")
        infer.infer(ckpt, masks, tmp_path / "o1")
        infer.infer(ckpt, masks, tmp_path / "o2")
        assert ((tmp_path / "o1" / "a.png").read_bytes()
                == (tmp_path / "o2" / "a.png").read_bytes())

    def test_empty_masks_dir_raises(self, tmp_path):
        ckpt = make_checkpoint(tmp_path / "ck.pt")
        (tmp_path / "masks").mkdir()
        with pytest.raises(FileNotFoundError):
            infer.infer(ckpt, tmp_path / "masks", tmp_path / "out")


@pytest.fixture()
def tiny_dataset(tmp_path):
    """Minimal pair layout: 6 train pairs, 2 val pairs, masks for val."""
    rng = np.random.default_rng(60)
    root = tmp_path / "data"
    for split, n in (("train", 6), ("val", 2)):
        for i in range(n):
            mask = banded_mask(64)
            photo = (rng.integers(0, 256, (64, 64))).astype(np.uint8)
            data.save_gray(np.hstack([mask, photo]), root / split / f"{split}{i}.png")
            data.save_gray(mask, root / "masks" / f"{split}{i}.png")
    return root


def stub_validation(monkeypatch, dices):
    """Replace the evaluator bridge with canned summaries."""
    it = iter(dices)

    def fake_run_evaluate(inputs_dir, fakes_dir, out_csv, evaluator="karyoband",
                          condition="real"):
        d = next(it)
        return {"dice": {"mean": d, "std": 0.0, "n": 2},
                "maenb": {"mean": 0.5, "std": 0.0, "n": 2}}

    monkeypatch.setattr(bridge, "run_evaluate", fake_run_evaluate)


class TestTrainLoop:
    def test_checkpoints_metrics_and_best(self, tiny_dataset, tmp_path, monkeypatch):
        stub_validation(monkeypatch, [0.4, 0.6])
        spec = TrainSpec(data_dir=str(tiny_dataset), ckpt_dir=str(tmp_path / "ck"),
                         epochs=2, batch_size=3, val_interval=1,
                         train_side=64, eval_side=64, base_channels=8, seed=1)
        summaries = train.train(spec)
        assert len(summaries) == 2
        assert (tmp_path / "ck" / "epoch_1.pt").exists()
        assert (tmp_path / "ck" / "epoch_2.pt").exists()
        assert (tmp_path / "ck" / "best.pt").exists()
        rows = bridge.read_val_metrics(tmp_path / "ck" / "val_metrics.csv")
        assert [r["epoch"] for r in rows] == [1, 2]
        best = torch.load(tmp_path / "ck" / "best.pt", weights_only=False)
        assert best["epoch"] == 2
        # generated validation images exist and are evaluator-sized
        img = data.load_gray(tmp_path / "ck" / "results" / "epoch_2" / "val0.png")
        assert img.shape == (64, 64)

    def test_resume_continues_epoch_numbering(self, tiny_dataset, tmp_path,
                                              monkeypatch):
        stub_validation(monkeypatch, [0.4, 0.5, 0.6])
        ck = tmp_path / "ck"
        spec = TrainSpec(data_dir=str(tiny_dataset), ckpt_dir=str(ck),
                         epochs=2, batch_size=3, val_interval=1,
                         train_side=64, eval_side=64, base_channels=8, seed=1)
        train.train(spec)
        spec3 = TrainSpec(**{**spec.to_dict(), "epochs": 3})
        train.train(spec3, resume=ck / "epoch_2.pt")
        assert (ck / "epoch_3.pt").exists()
        rows = bridge.read_val_metrics(ck / "val_metrics.csv")
        assert [r["epoch"] for r in rows] == [1, 2, 3]

    def test_missing_data_raises(self, tmp_path):
        spec = TrainSpec(data_dir=str(tmp_path / "none"), ckpt_dir=str(tmp_path),
                         epochs=1)
        with pytest.raises(FileNotFoundError):
            train.train(spec)
