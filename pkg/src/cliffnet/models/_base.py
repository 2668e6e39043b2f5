import numpy as np
from .. import autodiff as ad
from ..algebra import Signature
from ..errors import ShapeError
from ..layers import Module


class Surrogate(Module):
    """One-step surrogate ``u[k-t:k] -> u[k]``.

    Input history is ``[batch, time, blade, channel, spatial...]`` and is
    stacked along the channel axis of every blade; the output is one step
    ``[batch, blade, channel, spatial...]`` with unmapped blades exactly
    zero.
    """
    #: Clifford families mix blades, real ones treat them as channels
    clifford = True

    def __init__(self, config):
        super(Surrogate, self).__init__()
        self.config = config
        self.signature = Signature.parse(config.signature)
        self.blades = list(config.blades) if config.blades else list(range(self.signature.blade_count))
        self.history = config.history
        self.data_channels = config.data_channels
        self.ndim = config.ndim
        mask = np.zeros((1, self.signature.blade_count, 1) + (1,) * self.ndim)
        mask[:, self.blades] = 1.0
        self._mask = mask

    @property
    def in_channels(self):
        return self.history * self.data_channels

    def stack_history(self, history):
        history = ad.as_tensor(history)
        if history.ndim != 4 + self.ndim:
            raise ShapeError('history must be [batch, time, blade, channel, spatial...]')
        batch, steps, blades, channels = history.shape[:4]
        if steps != self.history:
            raise ShapeError('model needs {} history steps, got {}'.format(self.history, steps))
        if blades != self.signature.blade_count or channels != self.data_channels:
            raise ShapeError('history has {} blades x {} channels, model expects {} x {}'.format(
                blades, channels, self.signature.blade_count, self.data_channels))
        spatial = history.shape[4:]
        x = history.transpose((0, 2, 1, 3) + tuple(range(4, 4 + self.ndim)))
        return x.reshape((batch, blades, steps * channels) + spatial)

    def to_real(self, x):
        """``[batch, blade, c, ...]`` -> ``[batch, mapped*c, ...]``."""
        x = ad.take(x, self.blades, axis=1)
        return x.reshape((x.shape[0], -1) + x.shape[3:])

    def from_real(self, y):
        batch = y.shape[0]
        spatial = y.shape[2:]
        y = y.reshape((batch, len(self.blades), self.data_channels) + spatial)
        return ad.embed(y, self.blades, axis=1, size=self.signature.blade_count)

    def mask(self, y):
        return y * self._mask

    def step(self, x):
        raise NotImplementedError()

    def forward(self, history):
        x = self.stack_history(history)
        if not self.clifford:
            x = self.to_real(x)
            return self.from_real(self.step(x))
        return self.mask(self.step(x))


class Persistence(Surrogate):
    """Repeat the last known state; the reference every model must beat."""
    def step(self, x):
        c = self.data_channels
        return x[:, :, x.shape[2] - c:]
