"""Small U-Net generator and patch discriminator for paired translation."""

import torch
from torch import nn


def _down(in_ch, out_ch, norm=True):
    layers = [nn.Conv2d(in_ch, out_ch, 4, stride=2, padding=1, bias=not norm)]
    if norm:
        layers.append(nn.InstanceNorm2d(out_ch))
    layers.append(nn.LeakyReLU(0.2, inplace=True))
    return nn.Sequential(*layers)


def _up(in_ch, out_ch, dropout=False):
    layers = [nn.ConvTranspose2d(in_ch, out_ch, 4, stride=2, padding=1, bias=False),
              nn.InstanceNorm2d(out_ch)]
    if dropout:
        layers.append(nn.Dropout(0.5))
    layers.append(nn.ReLU(inplace=True))
    return nn.Sequential(*layers)


class UNetGenerator(nn.Module):
    """Encoder-decoder with skip connections, 4 downsampling stages."""

    def __init__(self, in_ch=1, out_ch=1, base=64):
        super().__init__()
        self.d1 = _down(in_ch, base, norm=False)
        self.d2 = _down(base, base * 2)
        self.d3 = _down(base * 2, base * 4)
        self.d4 = _down(base * 4, base * 8)
        self.u1 = _up(base * 8, base * 4, dropout=True)
        self.u2 = _up(base * 8, base * 2)
        self.u3 = _up(base * 4, base)
        self.final = nn.Sequential(
            nn.ConvTranspose2d(base * 2, out_ch, 4, stride=2, padding=1),
            nn.Tanh(),
        )

    def forward(self, x):
        e1 = self.d1(x)
        e2 = self.d2(e1)
        e3 = self.d3(e2)
        e4 = self.d4(e3)
        y = self.u1(e4)
        y = self.u2(torch.cat([y, e3], dim=1))
        y = self.u3(torch.cat([y, e2], dim=1))
        return self.final(torch.cat([y, e1], dim=1))


class PatchDiscriminator(nn.Module):
    """70x70-receptive-field patch classifier over (mask, photo) pairs."""

    def __init__(self, in_ch=2, base=64):
        super().__init__()
        self.net = nn.Sequential(
            _down(in_ch, base, norm=False),
            _down(base, base * 2),
            _down(base * 2, base * 4),
            nn.Conv2d(base * 4, 1, 4, stride=1, padding=1),
        )

    def forward(self, mask, photo):
        return self.net(torch.cat([mask, photo], dim=1))
