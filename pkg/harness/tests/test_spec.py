import pytest

from gan_harness.spec import TrainSpec


class TestTrainSpec:
    def test_defaults(self):
        s = TrainSpec(data_dir="d", ckpt_dir="c")
        assert s.epochs == 100
        assert s.batch_size == 32
        assert s.val_interval == 10
        assert s.train_side == 256
        assert s.eval_side == 128

    @pytest.mark.parametrize("kwargs", [
        {"epochs": 0}, {"epochs": -1}, {"batch_size": 0},
        {"val_interval": 0}, {"train_side": 100}, {"eval_side": 8},
        {"lr": 0.0}, {"l1_weight": -1.0}, {"base_channels": 2},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TrainSpec(data_dir="d", ckpt_dir="c", **kwargs)

    def test_val_epochs_include_final(self):
        s = TrainSpec(data_dir="d", ckpt_dir="c", epochs=20, val_interval=6)
        assert s.val_epochs == [6, 12, 18, 20]
        s = TrainSpec(data_dir="d", ckpt_dir="c", epochs=20, val_interval=10)
        assert s.val_epochs == [10, 20]
        s = TrainSpec(data_dir="d", ckpt_dir="c", epochs=3, val_interval=10)
        assert s.val_epochs == [3]

    def test_dict_roundtrip(self):
        s = TrainSpec(data_dir="d", ckpt_dir="c", epochs=7, seed=3)
        assert TrainSpec.from_dict(s.to_dict()) == s
