"""
    cliffnet.models.train
    ~~~~~~~~~~~~~~~~~~~~~

    One-step SMSE training with Adam and a warmed-up cosine schedule.

    Trajectories are split into train / valid sets once per seed. Every
    training sample is a window ``(trajectory, k)`` with history
    ``u[k-t:k]`` and target ``u[k]``. With ``threads=1`` two runs with the
    same seed produce the same curve bit for bit.
"""

import math
import logging
import numpy as np
from .. import autodiff as ad
from ..errors import ShapeError, PackingError, DivergenceError
from . import SurrogateConfig, create_model
from .checkpoint import save_checkpoint, load_checkpoint
from .metrics import smse, field_blades, evaluate
from .optim import Adam, cosine_schedule

__all__ = [
    'TrainResult', 'split_trajectories', 'training_windows', 'check_dataset', 'train',
]

log = logging.getLogger(__name__)


class TrainResult:
    def __init__(self, model, optimizer, curve, step, epoch, checkpoint=None):
        self.model = model
        self.optimizer = optimizer
        self.curve = curve
        self.step = step
        self.epoch = epoch
        self.checkpoint = checkpoint

    @property
    def final_train(self):
        return self.curve[-1][1] if self.curve else None

    @property
    def final_valid(self):
        return self.curve[-1][2] if self.curve else None


def split_trajectories(count, valid_fraction=0.1, seed=0):
    """Deterministic ``(train, valid)`` trajectory indices.

    A positive ``valid_fraction`` keeps at least one validation trajectory
    as long as one training trajectory remains.
    """
    if not 0.0 <= valid_fraction < 1.0:
        raise ValueError('valid_fraction must be in [0, 1)')
    order = np.random.default_rng(seed).permutation(count)
    n_valid = int(round(valid_fraction * count))
    if valid_fraction > 0 and count > 1:
        n_valid = min(max(n_valid, 1), count - 1)
    valid = sorted(int(i) for i in order[:n_valid])
    train = sorted(int(i) for i in order[n_valid:])
    return train, valid


def training_windows(trajectories, steps, history):
    windows = [(n, k) for n in trajectories for k in range(history, steps)]
    if not windows:
        raise ShapeError('trajectories of {} steps are too short for a history of {}'.format(steps, history))
    return windows


def _batch(data, windows, history):
    hist = np.stack([data[n, k - history:k] for n, k in windows]).astype(np.float64)
    target = np.stack([data[n, k] for n, k in windows]).astype(np.float64)
    return hist, target


def check_dataset(config, dataset):
    """Raise when ``dataset`` cannot feed a model built from ``config``."""
    if dataset.signature != config.signature:
        raise ValueError('dataset signature {} does not match the model {}'.format(
            dataset.signature, config.signature))
    if dataset.channels != config.data_channels:
        raise ShapeError('dataset has {} channels, model expects {}'.format(
            dataset.channels, config.data_channels))
    if len(dataset.spatial_shape) != config.ndim:
        raise ShapeError('dataset grid is {}D, model is {}D'.format(
            len(dataset.spatial_shape), config.ndim))
    if config.blades is not None:
        mapped = dataset.packing.mapped_blades(dataset.signature)
        if sorted(config.blades) != sorted(mapped):
            raise PackingError('model blades {} differ from the dataset packing {}'.format(
                config.blades, mapped))


def train(config, dataset, epochs=30, lr=1e-3, batch_size=8, seed=0, valid_fraction=0.1,
          out_dir=None, resume=None, hooks=None):
    """Train a surrogate on ``dataset``.

    :param config: :class:`SurrogateConfig` or its dict form
    :param dataset: :class:`~cliffnet.datagen.TrajectorySet`
    :param epochs: total epochs, counting those of a resumed checkpoint
    :param out_dir: checkpoint directory written after every epoch
    :param resume: checkpoint directory to continue from
    :param hooks: callables ``hook(model, epoch, row)`` run after each epoch
    :raises DivergenceError: on a non-finite loss; the model is restored to
        the last completed epoch, which is also the checkpoint on disk
    """
    if resume is not None:
        ckpt = load_checkpoint(resume)
        model = ckpt.model
        config = model.config
        optimizer = Adam(model.parameters(), lr)
        if ckpt.optimizer_state is not None:
            optimizer.load_state_dict(ckpt.optimizer_state)
        step, start_epoch, curve = ckpt.step, ckpt.epoch, ckpt.curve
        log.info('resuming from %s at epoch %d, step %d', resume, start_epoch, step)
    else:
        if isinstance(config, dict):
            config = SurrogateConfig.from_dict(config)
        model = create_model(config)
        optimizer = Adam(model.parameters(), lr)
        step, start_epoch, curve = 0, 0, []
    check_dataset(config, dataset)

    data = dataset.data
    t = config.history
    train_idx, valid_idx = split_trajectories(dataset.trajectories, valid_fraction, seed)
    windows = training_windows(train_idx, dataset.steps, t)
    steps_per_epoch = math.ceil(len(windows) / batch_size)
    total_steps = epochs * steps_per_epoch
    blades = field_blades(dataset.packing, dataset.signature)
    params = model.parameters()
    hooks = list(hooks or [])
    provenance = {'provenance': dataset.provenance, 'train': train_idx, 'valid': valid_idx}

    log.info('training %s: %d parameters, %d windows, %d steps per epoch',
             config.family, model.parameter_count(), len(windows), steps_per_epoch)

    def snapshot(epoch):
        if out_dir is not None:
            save_checkpoint(out_dir, model, optimizer, step, epoch, curve, provenance)

    if resume is None:
        snapshot(0)
    good_state = model.state_dict()

    for epoch in range(start_epoch, epochs):
        order = np.random.default_rng([seed, epoch]).permutation(len(windows))
        acc = 0.0
        for start in range(0, len(order), batch_size):
            batch = [windows[i] for i in order[start:start + batch_size]]
            hist, target = _batch(data, batch, t)
            loss = smse(model(hist), target, blades, config.ndim)
            value = float(loss.value)
            if not np.isfinite(value):
                model.load_state_dict(good_state)
                raise DivergenceError(
                    'loss became {} at step {}'.format(value, step),
                    step=step, checkpoint=out_dir)
            if params:
                grads = ad.grad(loss, params)
                optimizer.step(grads, lr=cosine_schedule(step, total_steps, lr))
            step += 1
            acc += value * len(batch)
            log.debug('step %d loss %.6g', step, value)

        train_smse = acc / len(windows)
        valid_smse = None
        if valid_idx:
            valid_smse = evaluate(model, dataset, ('onestep',), batch_size=batch_size,
                                  trajectories=valid_idx)['onestep']
        row = (step, train_smse, valid_smse)
        curve.append(row)
        good_state = model.state_dict()
        snapshot(epoch + 1)
        log.info('epoch %d/%d: train %.6g valid %s', epoch + 1, epochs, train_smse, valid_smse)
        for hook in hooks:
            hook(model, epoch, row)

    return TrainResult(model, optimizer, curve, step, max(epochs, start_epoch), out_dir)
