"""
    cliffnet.models.resnet
    ~~~~~~~~~~~~~~~~~~~~~~

    Residual surrogates: two pointwise embedding layers, pre-activation
    residual blocks of two convolutions, two pointwise output layers.
"""

import numpy as np
from ..layers import (
    CliffordConv, Conv, RotationalCliffordConv2d, CliffordGroupNorm, GroupNorm,
    clifford_gelu,
)
from ..layers._base import Module
from ._base import Surrogate


class ResidualBlock(Module):
    def __init__(self, conv1, conv2, norm1=None, norm2=None):
        super(ResidualBlock, self).__init__()
        self.norm1 = norm1
        self.conv1 = conv1
        self.norm2 = norm2
        self.conv2 = conv2

    def forward(self, x):
        h = x
        if self.norm1 is not None:
            h = self.norm1(h)
        h = self.conv1(clifford_gelu(h))
        if self.norm2 is not None:
            h = self.norm2(h)
        h = self.conv2(clifford_gelu(h))
        return x + h


class _ResNetBase(Surrogate):
    def __init__(self, config):
        super(_ResNetBase, self).__init__(config)
        rng = np.random.default_rng(config.seed)
        c = config.channels
        c_in, c_out = self.io_channels()
        self.embed1 = self.pointwise(c_in, c, rng)
        self.embed2 = self.pointwise(c, c, rng)
        self.blocks = []
        for i in range(config.blocks):
            norm1 = self.norm(c) if config.norm else None
            norm2 = self.norm(c) if config.norm else None
            block = ResidualBlock(self.spatial(c, c, rng), self.spatial(c, c, rng), norm1, norm2)
            self.blocks.append(self.add_module('block{}'.format(i), block))
        self.out1 = self.pointwise(c, c, rng)
        self.out2 = self.pointwise(c, c_out, rng)

    def io_channels(self):
        return self.in_channels, self.data_channels

    def step(self, x):
        h = clifford_gelu(self.embed1(x))
        h = clifford_gelu(self.embed2(h))
        for block in self.blocks:
            h = block(h)
        h = clifford_gelu(self.out1(h))
        return self.out2(h)


class ResNet(_ResNetBase):
    """Real-valued baseline: blades are folded into channels."""
    clifford = False

    def io_channels(self):
        k = len(self.blades)
        return k * self.in_channels, k * self.data_channels

    def pointwise(self, c_in, c_out, rng):
        return Conv(c_in, c_out, 1, self.ndim, seed=rng)

    def spatial(self, c_in, c_out, rng):
        return Conv(c_in, c_out, self.config.kernel_size, self.ndim, seed=rng)

    def norm(self, c):
        return GroupNorm(c)


class CliffordResNet(_ResNetBase):
    def _init_mode(self):
        return 'scaled3d' if self.ndim == 3 else 'default'

    def pointwise(self, c_in, c_out, rng):
        return CliffordConv(c_in, c_out, (1,) * self.ndim, self.signature,
                            init_mode=self._init_mode(), seed=rng)

    def spatial(self, c_in, c_out, rng):
        k = (self.config.kernel_size,) * self.ndim
        return CliffordConv(c_in, c_out, k, self.signature, init_mode=self._init_mode(), seed=rng)

    def norm(self, c):
        return CliffordGroupNorm(c, signature=self.signature)


class RotationalCliffordResNet(CliffordResNet):
    """Clifford ResNet whose residual convolutions are rotational."""
    def spatial(self, c_in, c_out, rng):
        return RotationalCliffordConv2d(c_in, c_out, self.config.kernel_size,
                                        faithful=self.config.faithful, seed=rng)
