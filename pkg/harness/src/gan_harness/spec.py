"""Training-run specification."""

from dataclasses import dataclass, field, asdict
from pathlib import Path


@dataclass
class TrainSpec:
    """Hyperparameters and directory layout of one training run.

    ``data_dir`` must contain ``train/`` and ``val/`` side-by-side pair
    images (height x 2*width, mask left, photo right) plus the ``masks/``,
    ``bp/`` and ``sidecar.csv`` inputs the evaluator consumes.
    Checkpoints, per-epoch validation images and ``val_metrics.csv`` are
    written under ``ckpt_dir``.
    """

    data_dir: str
    ckpt_dir: str
    epochs: int = 100
    batch_size: int = 32
    val_interval: int = 10
    train_side: int = 256
    eval_side: int = 128
    lr: float = 2e-4
    beta1: float = 0.5
    l1_weight: float = 100.0
    base_channels: int = 64
    seed: int = 0
    device: str = "cpu"
    evaluator: str = "karyoband"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.val_interval < 1:
            raise ValueError("val_interval must be >= 1")
        for name in ("train_side", "eval_side"):
            side = getattr(self, name)
            if side < 16 or side % 16 != 0:
                raise ValueError(f"{name} must be a positive multiple of 16")
        if not 0.0 < self.lr:
            raise ValueError("lr must be positive")
        if self.l1_weight < 0.0:
            raise ValueError("l1_weight must be non-negative")
        if self.base_channels < 4:
            raise ValueError("base_channels must be >= 4")

    @property
    def val_epochs(self):
        """Epoch numbers (1-based) at which validation runs."""
        epochs = list(range(self.val_interval, self.epochs + 1, self.val_interval))
        if not epochs or epochs[-1] != self.epochs:
            epochs.append(self.epochs)
        return epochs

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @property
    def data_path(self):
        return Path(self.data_dir)

    @property
    def ckpt_path(self):
        return Path(self.ckpt_dir)
