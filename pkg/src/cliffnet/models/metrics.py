"""
    cliffnet.models.metrics
    ~~~~~~~~~~~~~~~~~~~~~~~

    Summed mean squared error and the one-step / rollout evaluation.

    ``smse = (1 / N_y) sum_y sum_t sum_fields |u - u_hat|^2``, averaged over
    the batch: squared errors are summed over time, fields and space and
    divided by the number of grid points.
"""

import logging
import numpy as np
from .. import autodiff as ad
from ..algebra import blade_masks, grade
from ..errors import ShapeError, DivergenceError

__all__ = [
    'METRIC_NAMES', 'ROLLOUT_STEPS', 'smse', 'field_blades',
    'Metrics', 'rollout', 'evaluate',
]

log = logging.getLogger(__name__)

ROLLOUT_STEPS = 5

#: metric name -> grade of the field partition (``None``: all mapped blades)
_PARTITIONS = {
    'onestep': None,
    'scalar': 0,
    'vector': 1,
    'bivector': 2,
    'electric': 1,
    'magnetic': 2,
}
METRIC_NAMES = tuple(_PARTITIONS) + ('rollout',)


def smse(pred, target, blades=None, ndim=2):
    """SMSE of ``[batch, (time,) blade, channel, spatial...]`` arrays.

    Returns a float for arrays and a scalar tensor when either argument is
    a tensor. ``blades`` selects the fields that are summed.
    """
    if pred.shape != target.shape:
        raise ShapeError('prediction {} and target {} differ in shape'.format(pred.shape, target.shape))
    blade_axis = pred.ndim - ndim - 2
    if blade_axis < 1:
        raise ShapeError('expected [batch, (time,) blade, channel, spatial...]')
    points = int(np.prod(pred.shape[-ndim:]))
    batch = pred.shape[0]

    if isinstance(pred, ad.Tensor) or isinstance(target, ad.Tensor):
        diff = ad.as_tensor(pred) - ad.as_tensor(target)
        if blades is not None:
            diff = ad.take(diff, list(blades), axis=blade_axis)
        return (diff * diff).sum() / (points * batch)

    diff = np.asarray(pred, dtype=np.float64) - np.asarray(target, dtype=np.float64)
    if blades is not None:
        diff = np.take(diff, list(blades), axis=blade_axis)
    return float(np.sum(diff * diff) / (points * batch))


def field_blades(packing, signature, name='onestep'):
    """Blade positions summed by the metric ``name``."""
    if name not in _PARTITIONS:
        raise ValueError('unknown metric: {!r}'.format(name))
    k = _PARTITIONS[name]
    if k is None:
        return packing.mapped_blades(signature)
    masks = blade_masks(signature.n)
    return [b for b in packing.mapped_blades(signature) if grade(masks[b]) == k]


class Metrics(dict):
    """Metric name -> value; every value is non-negative."""
    def __setitem__(self, name, value):
        if value is not None and value < 0:
            raise ValueError('metric {} is negative'.format(name))
        super(Metrics, self).__setitem__(name, value)


def _check_finite(value, step):
    if not np.all(np.isfinite(value)):
        raise DivergenceError('non-finite activations in rollout step {}'.format(step), step=step)


def rollout(model, history, steps=ROLLOUT_STEPS, target=None, blades=None):
    """Apply ``model`` autoregressively with a sliding history window.

    :param history: ``[batch, t, blade, channel, spatial...]``
    :param target: optional ``[batch, steps, ...]`` ground truth
    :return: ``(trajectory [batch, steps, ...], smse or None)``
    """
    window = np.asarray(history, dtype=np.float64)
    outputs = []
    with ad.no_grad():
        for step in range(steps):
            pred = model(window).value
            _check_finite(pred, step)
            outputs.append(pred)
            window = np.concatenate([window[:, 1:], pred[:, np.newaxis]], axis=1)
    trajectory = np.stack(outputs, axis=1)
    loss = None
    if target is not None:
        loss = smse(trajectory, np.asarray(target), blades, ndim=model.ndim)
    return trajectory, loss


def _batches(items, size):
    for i in range(0, len(items), size):
        yield items[i:i + size]


def evaluate(model, dataset, metrics=('onestep', 'scalar', 'vector', 'rollout'),
             steps=ROLLOUT_STEPS, batch_size=16, trajectories=None):
    """Average metrics over every window of ``dataset``.

    One-step metrics use every target index ``k >= t``; the rollout uses
    the starts with ``steps`` targets available.
    """
    data = dataset.data
    t = model.history
    total = data.shape[1]
    indices = range(data.shape[0]) if trajectories is None else trajectories
    result = Metrics()

    onestep = [m for m in metrics if m != 'rollout']
    if onestep:
        windows = [(n, k) for n in indices for k in range(t, total)]
        if not windows:
            raise ShapeError('trajectories are too short for a history of {}'.format(t))
        sums = {m: 0.0 for m in onestep}
        selections = {m: field_blades(dataset.packing, dataset.signature, m) for m in onestep}
        for batch in _batches(windows, batch_size):
            hist = np.stack([data[n, k - t:k] for n, k in batch]).astype(np.float64)
            target = np.stack([data[n, k] for n, k in batch]).astype(np.float64)
            with ad.no_grad():
                pred = model(hist).value
            _check_finite(pred, 0)
            for m in onestep:
                sums[m] += smse(pred, target, selections[m], model.ndim) * len(batch)
        for m in onestep:
            result[m] = sums[m] / len(windows)

    if 'rollout' in metrics:
        starts = [(n, k) for n in indices for k in range(t, total - steps + 1)]
        if not starts:
            log.warning('trajectories too short for a %d step rollout', steps)
            result['rollout'] = None
        else:
            blades = field_blades(dataset.packing, dataset.signature)
            acc = 0.0
            for batch in _batches(starts, batch_size):
                hist = np.stack([data[n, k - t:k] for n, k in batch]).astype(np.float64)
                target = np.stack([data[n, k:k + steps] for n, k in batch]).astype(np.float64)
                _, loss = rollout(model, hist, steps, target, blades)
                acc += loss * len(batch)
            result['rollout'] = acc / len(starts)
    log.info('evaluated %s', ', '.join('{}={}'.format(k, v) for k, v in result.items()))
    return result
