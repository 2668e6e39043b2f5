"""
    cliffnet.models.fno
    ~~~~~~~~~~~~~~~~~~~

    Fourier surrogates: two pointwise embedding layers, Fourier blocks
    (spectral layer plus pointwise convolution), two pointwise output
    layers. The last block has no activation.
"""

import numpy as np
from ..layers import (
    CliffordConv, CliffordFourierBlock, Conv, SpectralConv, clifford_gelu,
)
from ..layers._base import Module
from ._base import Surrogate


class FourierBlock(Module):
    """Real Fourier block: ``gelu(spectral(x) + conv1x1(x))``."""
    def __init__(self, c_in, c_out, modes, ndim=2, activation=True, seed=None):
        super(FourierBlock, self).__init__()
        rng = np.random.default_rng(seed)
        self.spectral = SpectralConv(c_in, c_out, modes, ndim, seed=rng)
        self.conv = Conv(c_in, c_out, 1, ndim, seed=rng)
        self.activation = activation

    def forward(self, x):
        out = self.spectral(x) + self.conv(x)
        if self.activation:
            out = clifford_gelu(out)
        return out


class FNO(Surrogate):
    clifford = False

    def __init__(self, config):
        super(FNO, self).__init__(config)
        rng = np.random.default_rng(config.seed)
        c = config.channels
        k = len(self.blades)
        d = self.ndim
        self.embed1 = Conv(k * self.in_channels, c, 1, d, seed=rng)
        self.embed2 = Conv(c, c, 1, d, seed=rng)
        self.blocks = []
        for i in range(config.blocks):
            block = FourierBlock(c, c, config.modes, d, activation=i < config.blocks - 1, seed=rng)
            self.blocks.append(self.add_module('block{}'.format(i), block))
        self.out1 = Conv(c, c, 1, d, seed=rng)
        self.out2 = Conv(c, k * self.data_channels, 1, d, seed=rng)

    def step(self, x):
        h = clifford_gelu(self.embed1(x))
        h = clifford_gelu(self.embed2(h))
        for block in self.blocks:
            h = block(h)
        h = clifford_gelu(self.out1(h))
        return self.out2(h)


class CliffordFNO(Surrogate):
    def __init__(self, config):
        super(CliffordFNO, self).__init__(config)
        rng = np.random.default_rng(config.seed)
        c = config.channels
        sig = self.signature
        one = (1,) * self.ndim
        init_mode = 'scaled3d' if self.ndim == 3 else 'default'
        self.embed1 = CliffordConv(self.in_channels, c, one, sig, init_mode=init_mode, seed=rng)
        self.embed2 = CliffordConv(c, c, one, sig, init_mode=init_mode, seed=rng)
        self.blocks = []
        for i in range(config.blocks):
            block = CliffordFourierBlock(c, c, config.modes, sig, activation=i < config.blocks - 1, seed=rng)
            self.blocks.append(self.add_module('block{}'.format(i), block))
        self.out1 = CliffordConv(c, c, one, sig, init_mode=init_mode, seed=rng)
        self.out2 = CliffordConv(c, self.data_channels, one, sig, init_mode=init_mode, seed=rng)

    def step(self, x):
        h = clifford_gelu(self.embed1(x))
        h = clifford_gelu(self.embed2(h))
        for block in self.blocks:
            h = block(h)
        h = clifford_gelu(self.out1(h))
        return self.out2(h)
