"""
    cliffnet.models.optim
    ~~~~~~~~~~~~~~~~~~~~~

    Adam with bias correction and the warmup plus cosine
    learning rate schedule used by the trainer.
"""
import math
import numpy as np

__all__ = ['Adam', 'cosine_schedule', 'WARMUP_FRACTION']

WARMUP_FRACTION = 0.05


def cosine_schedule(step, total_steps, base_lr, warmup_fraction=WARMUP_FRACTION):
    """Linear warmup over the first ``warmup_fraction`` of the steps, then
    cosine annealing to zero."""
    total_steps = max(1, int(total_steps))
    warmup = max(1, int(round(warmup_fraction * total_steps)))
    if step < warmup:
        return base_lr * (step + 1) / warmup
    progress = (step - warmup) / max(1, total_steps - warmup)
    progress = min(progress, 1.0)
    return base_lr * 0.5 * (1.0 + math.cos(math.pi * progress))


class Adam:
    """Adam with bias correction.

    :param params: parameter tensors, updated in place
    """
    def __init__(self, params, lr=1e-3, betas=(0.9, 0.999), eps=1e-8):
        self.params = list(params)
        self.lr = lr
        self.betas = tuple(betas)
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p.value, dtype=np.float64) for p in self.params]
        self.v = [np.zeros_like(p.value, dtype=np.float64) for p in self.params]

    def step(self, grads, lr=None):
        lr = self.lr if lr is None else lr
        b1, b2 = self.betas
        self.t += 1
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for k, (p, g) in enumerate(zip(self.params, grads)):
            self.m[k] = b1 * self.m[k] + (1.0 - b1) * g
            self.v[k] = b2 * self.v[k] + (1.0 - b2) * g * g
            update = lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + self.eps)
            p.value = p.value - update

    def state_dict(self):
        return {'t': self.t, 'm': [m.copy() for m in self.m], 'v': [v.copy() for v in self.v]}

    def load_state_dict(self, state):
        if len(state['m']) != len(self.params):
            raise ValueError('optimizer state holds {} moments for {} parameters'.format(
                len(state['m']), len(self.params)))
        self.t = int(state['t'])
        self.m = [np.array(m, dtype=np.float64).reshape(p.shape) for m, p in zip(state['m'], self.params)]
        self.v = [np.array(v, dtype=np.float64).reshape(p.shape) for v, p in zip(state['v'], self.params)]
