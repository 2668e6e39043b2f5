"""
    cliffnet.datagen.advection
    ~~~~~~~~~~~~~~~~~~~~~~~~~~

    Passive scalar transport on the periodic unit square. The scalar is a
    mixture of periodic Gaussian blobs; the vector blades carry the
    velocity.

    - ``constant`` velocity: exact transport by a spectral phase shift,
      ``s(x, t) = s0(x - v t)``.
    - ``rotation``: solid-body rotation about the domain center, one
      bilinear semi-Lagrangian step per stored step.
"""

import logging
import numpy as np
from ..algebra import CL20
from ..fields import ADVECTION_PACKING, pack
from ..util import parallel_map
from .clf import TrajectorySet

__all__ = [
    'VELOCITY_LAWS', 'blob_mixture', 'spectral_shift', 'rotate_semi_lagrangian',
    'gen_advection2d',
]

log = logging.getLogger(__name__)

VELOCITY_LAWS = ('constant', 'rotation')


def blob_mixture(grid, rng, blobs=(2, 5), width=(0.05, 0.15), amplitude=(0.5, 1.5)):
    """Sum of periodic Gaussians on the ``grid x grid`` unit square."""
    x = np.arange(grid) / grid
    xx, yy = np.meshgrid(x, x, indexing='ij')
    field = np.zeros((grid, grid))
    count = rng.integers(blobs[0], blobs[1] + 1)
    for _ in range(count):
        cx, cy = rng.uniform(0.0, 1.0, size=2)
        sigma = rng.uniform(*width)
        amp = rng.uniform(*amplitude)
        for ox in (-1, 0, 1):
            for oy in (-1, 0, 1):
                r2 = (xx - cx - ox) ** 2 + (yy - cy - oy) ** 2
                field += amp * np.exp(-0.5 * r2 / sigma ** 2)
    return field


def spectral_shift(field, displacement, spacing):
    """Periodic translation ``s(x) -> s(x - d)`` by any real displacement."""
    grid = field.shape
    phase = np.zeros(grid)
    for axis, (d, size, dx) in enumerate(zip(displacement, grid, spacing)):
        k = np.fft.fftfreq(size, d=dx).reshape([-1 if a == axis else 1 for a in range(len(grid))])
        phase = phase + k * d
    return np.fft.ifftn(np.fft.fftn(field) * np.exp(-2j * np.pi * phase)).real


def _bilinear_periodic(field, px, py):
    """Sample ``field`` at fractional grid coordinates with wrap-around."""
    n0, n1 = field.shape
    x0 = np.floor(px).astype(int)
    y0 = np.floor(py).astype(int)
    fx = px - x0
    fy = py - y0
    x0 %= n0
    y0 %= n1
    x1 = (x0 + 1) % n0
    y1 = (y0 + 1) % n1
    return ((1 - fx) * (1 - fy) * field[x0, y0] + fx * (1 - fy) * field[x1, y0]
            + (1 - fx) * fy * field[x0, y1] + fx * fy * field[x1, y1])


def rotation_velocity(grid, omega, center=(0.5, 0.5)):
    x = np.arange(grid) / grid
    xx, yy = np.meshgrid(x, x, indexing='ij')
    return -omega * (yy - center[1]), omega * (xx - center[0])


def rotate_semi_lagrangian(field, angle, center=(0.5, 0.5)):
    """One semi-Lagrangian step of solid rotation by ``angle``.

    Departure points are found by rotating back exactly, values are
    interpolated bilinearly.
    """
    grid = field.shape[0]
    x = np.arange(grid) / grid
    xx, yy = np.meshgrid(x, x, indexing='ij')
    c, s = np.cos(angle), np.sin(angle)
    rx, ry = xx - center[0], yy - center[1]
    dep_x = c * rx + s * ry + center[0]
    dep_y = -s * rx + c * ry + center[1]
    return _bilinear_periodic(field, dep_x * grid, dep_y * grid)


def _trajectory(index, grid, steps, velocity, dt, seed, max_speed, dx):
    rng = np.random.default_rng([seed, index])
    s0 = blob_mixture(grid, rng)
    scalar = np.zeros((steps, grid, grid))
    vx = np.zeros((steps, grid, grid))
    vy = np.zeros((steps, grid, grid))

    if velocity == 'constant':
        v = rng.uniform(-max_speed, max_speed, size=2)
        for n in range(steps):
            scalar[n] = spectral_shift(s0, v * n * dt, (dx, dx))
        vx[:] = v[0]
        vy[:] = v[1]
    else:
        omega = rng.uniform(-max_speed, max_speed)
        ux, uy = rotation_velocity(grid, omega)
        scalar[0] = s0
        for n in range(1, steps):
            scalar[n] = rotate_semi_lagrangian(scalar[n - 1], omega * dt)
        vx[:] = ux
        vy[:] = uy

    frames = [
        pack({'scalar': scalar[n], 'velocity_x': vx[n], 'velocity_y': vy[n]},
             ADVECTION_PACKING, CL20).data
        for n in range(steps)
    ]
    return np.stack(frames)


def gen_advection2d(grid=32, trajectories=16, steps=10, velocity='constant', dt=0.05,
                    seed=0, max_speed=1.0, dtype=np.float32, threads=1):
    """Generate scalar advection trajectories on a ``grid x grid`` periodic
    unit square, ``dx = 1 / grid``.

    Trajectory ``i`` draws from ``default_rng([seed, i])``, so results do
    not depend on ``threads``.
    """
    if velocity not in VELOCITY_LAWS:
        raise ValueError('unknown velocity law: {!r}'.format(velocity))
    if grid < 2 or trajectories < 1 or steps < 1:
        raise ValueError('grid, trajectories and steps must be positive')
    if dt <= 0:
        raise ValueError('dt must be positive')
    dx = 1.0 / grid

    log.info('advection2d: %d trajectories of %d steps on %dx%d', trajectories, steps, grid, grid)
    data = parallel_map(
        lambda i: _trajectory(i, grid, steps, velocity, dt, seed, max_speed, dx),
        range(trajectories), threads,
    )
    provenance = {
        'generator': 'advection2d',
        'params': {
            'grid': grid, 'trajectories': trajectories, 'steps': steps,
            'velocity': velocity, 'dt': dt, 'max_speed': max_speed,
        },
        'seed': seed,
    }
    return TrajectorySet(np.stack(data).astype(dtype), dt, (dx, dx), CL20,
                         ADVECTION_PACKING, provenance)
