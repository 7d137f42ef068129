"""Adversarial training loop with periodic bridged validation."""

import logging
from pathlib import Path

import torch
from torch import nn, optim
from torch.utils.data import DataLoader

from . import bridge, data, infer
from .models import PatchDiscriminator, UNetGenerator
from .spec import TrainSpec

log = logging.getLogger(__name__)


def save_checkpoint(path, spec, epoch, gen, disc, opt_g, opt_d, best_dice):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    torch.save({
        "spec": spec.to_dict(),
        "epoch": epoch,
        "generator": gen.state_dict(),
        "discriminator": disc.state_dict(),
        "opt_g": opt_g.state_dict(),
        "opt_d": opt_d.state_dict(),
        "best_dice": best_dice,
    }, path)


def validate(spec, epoch, gen):
    """Generate images for the validation masks and score them."""
    val_ids = sorted(p.stem for p in (spec.data_path / "val").glob("*.png"))
    results = spec.ckpt_path / "results" / f"epoch_{epoch}"
    results.mkdir(parents=True, exist_ok=True)
    gen.eval()
    for sid in val_ids:
        mask = data.load_gray(spec.data_path / "masks" / f"{sid}.png")
        img = infer.generate_one(gen, mask, spec.train_side, spec.device)
        if img.shape != (spec.eval_side, spec.eval_side):
            img = data.to_uint8(
                data.bilinear_resize(img, spec.eval_side, spec.eval_side))
        data.save_gray(img, results / f"{sid}.png")
    gen.train()
    summary = bridge.run_evaluate(spec.data_dir, results,
                                  spec.ckpt_path / "val" / f"epoch_{epoch}.csv",
                                  evaluator=spec.evaluator)
    bridge.append_val_metrics(spec.ckpt_path / "val_metrics.csv", epoch, summary)
    return summary


def train(spec: TrainSpec, resume=None):
    """Run the minimax loop; returns the list of validation summaries.

    ``resume`` may name a checkpoint; training then continues from its
    recorded epoch with the same optimizers.
    """
    if not (spec.data_path / "train").is_dir():
        raise FileNotFoundError(f"no train/ pairs under {spec.data_dir}")
    if not (spec.data_path / "val").is_dir():
        raise FileNotFoundError(f"no val/ pairs under {spec.data_dir}")
    torch.manual_seed(spec.seed)
    device = spec.device

    gen = UNetGenerator(base=spec.base_channels).to(device)
    disc = PatchDiscriminator(base=spec.base_channels).to(device)
    opt_g = optim.Adam(gen.parameters(), lr=spec.lr, betas=(spec.beta1, 0.999))
    opt_d = optim.Adam(disc.parameters(), lr=spec.lr, betas=(spec.beta1, 0.999))
    start_epoch = 0
    best_dice = -1.0
    if resume is not None:
        state = torch.load(resume, map_location=device, weights_only=False)
        gen.load_state_dict(state["generator"])
        disc.load_state_dict(state["discriminator"])
        opt_g.load_state_dict(state["opt_g"])
        opt_d.load_state_dict(state["opt_d"])
        start_epoch = state["epoch"]
        best_dice = state.get("best_dice", -1.0)
        log.info("resumed from %s at epoch %d", resume, start_epoch)

    loader = DataLoader(data.PairDataset(spec.data_path / "train", spec.train_side),
                        batch_size=spec.batch_size, shuffle=True,
                        generator=torch.Generator().manual_seed(spec.seed))
    adv_loss = nn.BCEWithLogitsLoss()
    l1_loss = nn.L1Loss()

    gen.train()
    disc.train()
    summaries = []
    for epoch in range(start_epoch + 1, spec.epochs + 1):
        g_total = d_total = n_batches = 0.0
        for mask, photo, _ in loader:
            mask = mask.to(device)
            photo = photo.to(device)
            fake = gen(mask)

            opt_d.zero_grad()
            pred_real = disc(mask, photo)
            pred_fake = disc(mask, fake.detach())
            loss_d = 0.5 * (adv_loss(pred_real, torch.ones_like(pred_real))
                            + adv_loss(pred_fake, torch.zeros_like(pred_fake)))
            loss_d.backward()
            opt_d.step()

            opt_g.zero_grad()
            pred_fake = disc(mask, fake)
            loss_g = (adv_loss(pred_fake, torch.ones_like(pred_fake))
                      + spec.l1_weight * l1_loss(fake, photo))
            loss_g.backward()
            opt_g.step()

            g_total += float(loss_g.detach())
            d_total += float(loss_d.detach())
            n_batches += 1
        log.info("epoch %d: G %.4f D %.4f", epoch,
                 g_total / n_batches, d_total / n_batches)

        if epoch in spec.val_epochs:
            summary = validate(spec, epoch, gen)
            summaries.append(summary)
            dice = summary["dice"]["mean"]
            log.info("epoch %d: val dice %.4f maenb %.4f", epoch, dice,
                     summary["maenb"]["mean"])
            save_checkpoint(spec.ckpt_path / f"epoch_{epoch}.pt", spec, epoch,
                            gen, disc, opt_g, opt_d, max(best_dice, dice))
            if dice > best_dice:
                best_dice = dice
                save_checkpoint(spec.ckpt_path / "best.pt", spec, epoch,
                                gen, disc, opt_g, opt_d, best_dice)
    return summaries
