"""
    cliffnet.datagen.maxwell
    ~~~~~~~~~~~~~~~~~~~~~~~~

    Source-driven 3D Maxwell trajectories from a periodic Yee-grid FDTD
    leapfrog in unit-normalized constants (eps0 = mu0 = c = 1, so D = E).

    ``E`` lives at integer time levels and ``H`` at half levels. Stored
    frames hold ``E^n`` in the vector blades and ``(H^{n-1/2} + H^{n+1/2}) / 2``
    in the bivector blades; values are reported on grid indices, the Yee
    half-cell staggering is not interpolated away.
"""

import logging
import numpy as np
from ..algebra import CL30
from ..errors import CourantError
from ..fields import MAXWELL_PACKING, pack
from ..util import parallel_map
from .clf import TrajectorySet

__all__ = [
    'SPEED_OF_LIGHT', 'COURANT_SAFETY', 'courant_limit', 'YeeSolver',
    'CurrentSheet', 'plane_wave', 'gen_maxwell3d',
]

log = logging.getLogger(__name__)

SPEED_OF_LIGHT = 1.0

#: default ``dt`` as a fraction of the Courant limit
COURANT_SAFETY = 0.5


def courant_limit(dx):
    """Largest stable step ``dx / (c sqrt(3))`` on a cubic Yee grid."""
    return dx / (SPEED_OF_LIGHT * np.sqrt(3.0))


def _forward(a, axis, dx):
    return (np.roll(a, -1, axis=axis) - a) / dx


def _backward(a, axis, dx):
    return (a - np.roll(a, 1, axis=axis)) / dx


def curl_forward(f, dx):
    """Curl of an edge field with forward differences (E -> faces)."""
    fx, fy, fz = f
    return np.stack([
        _forward(fz, 1, dx) - _forward(fy, 2, dx),
        _forward(fx, 2, dx) - _forward(fz, 0, dx),
        _forward(fy, 0, dx) - _forward(fx, 1, dx),
    ])


def curl_backward(f, dx):
    """Curl of a face field with backward differences (H -> edges)."""
    fx, fy, fz = f
    return np.stack([
        _backward(fz, 1, dx) - _backward(fy, 2, dx),
        _backward(fx, 2, dx) - _backward(fz, 0, dx),
        _backward(fy, 0, dx) - _backward(fx, 1, dx),
    ])


class CurrentSheet:
    """Soft sinusoidal current on the plane ``index = 0`` normal to
    ``axis``, polarized along ``component``.

    ``J(t) = amplitude * sin(2 pi c t / wavelength + phase)``
    """
    def __init__(self, axis, component, amplitude, phase, wavelength):
        if component == axis:
            raise ValueError('a sheet current must be tangential to its plane')
        self.axis = axis
        self.component = component
        self.amplitude = amplitude
        self.phase = phase
        self.wavelength = wavelength

    def value(self, t):
        omega = 2.0 * np.pi * SPEED_OF_LIGHT / self.wavelength
        return self.amplitude * np.sin(omega * t + self.phase)

    def apply(self, e, t, dt, dx):
        index = [slice(None)] * 3
        index[self.axis] = 0
        e[self.component][tuple(index)] -= dt * self.value(t) / dx

    def to_dict(self):
        return {
            'axis': self.axis, 'component': self.component,
            'amplitude': self.amplitude, 'phase': self.phase,
            'wavelength': self.wavelength,
        }


class YeeSolver:
    """Periodic Yee leapfrog on an ``M^3`` grid.

    State is ``(E^n, H^{n-1/2})``; :meth:`step` advances both by ``dt``.

    :param dx: grid spacing
    :param dt: time step, at most :func:`courant_limit`
    :param sources: :class:`CurrentSheet` objects
    """
    def __init__(self, grid, dx, dt, sources=(), e=None, h=None):
        if dt <= 0:
            raise ValueError('dt must be positive')
        limit = courant_limit(dx)
        if dt > limit:
            raise CourantError('dt={} exceeds the Courant limit {:.6g} for dx={}'.format(dt, limit, dx))
        shape = (3, grid, grid, grid)
        self.grid = grid
        self.dx = dx
        self.dt = dt
        self.sources = list(sources)
        self.e = np.zeros(shape) if e is None else np.array(e, dtype=np.float64)
        self.h = np.zeros(shape) if h is None else np.array(h, dtype=np.float64)
        if self.e.shape != shape or self.h.shape != shape:
            raise ValueError('fields must have shape {}'.format(shape))
        self.n = 0

    @property
    def time(self):
        return self.n * self.dt

    def next_h(self):
        """``H^{n+1/2}`` from the current state."""
        return self.h - self.dt * curl_forward(self.e, self.dx)

    def step(self):
        h_next = self.next_h()
        e_next = self.e + self.dt * curl_backward(h_next, self.dx)
        t_half = (self.n + 0.5) * self.dt
        for source in self.sources:
            source.apply(e_next, t_half, self.dt, self.dx)
        previous = self.h
        self.h = h_next
        self.e = e_next
        self.n += 1
        return previous

    def energy(self):
        """Discrete energy ``sum E^n.E^n + sum H^{n-1/2}.H^{n+1/2}``,
        conserved exactly by source-free leapfrog."""
        return float(np.sum(self.e * self.e) + np.sum(self.h * self.next_h()))


def plane_wave(grid, dx, dt, amplitude=1.0, periods=1):
    """Initial ``(E^0, H^{-1/2})`` of an ``E_y``-polarized plane wave
    travelling along ``+x`` with ``periods`` wavelengths across the box."""
    k = 2.0 * np.pi * periods / (grid * dx)
    omega = SPEED_OF_LIGHT * k
    x = np.arange(grid) * dx
    e = np.zeros((3, grid, grid, grid))
    h = np.zeros((3, grid, grid, grid))
    e[1] = amplitude * np.cos(k * x)[:, None, None]
    # H_z sits half a cell along x and half a step back in time
    h[2] = amplitude * np.cos(k * (x + 0.5 * dx) + 0.5 * omega * dt)[:, None, None]
    return e, h


def random_sources(rng, grid, dx, count=(1, 3), amplitude=(0.5, 1.0)):
    sources = []
    for _ in range(rng.integers(count[0], count[1] + 1)):
        axis = int(rng.integers(3))
        component = int(rng.choice([a for a in range(3) if a != axis]))
        sources.append(CurrentSheet(
            axis, component,
            amplitude=float(rng.uniform(*amplitude)),
            phase=float(rng.uniform(0.0, 2.0 * np.pi)),
            wavelength=float(rng.uniform(8 * dx, grid * dx)),
        ))
    return sources


def _frame(e, h_prev, h_next):
    h = 0.5 * (h_prev + h_next)
    fields = {
        'electric_x': e[0], 'electric_y': e[1], 'electric_z': e[2],
        'magnetic_x': h[0], 'magnetic_y': h[1], 'magnetic_z': h[2],
    }
    return pack(fields, MAXWELL_PACKING, CL30).data


def _trajectory(index, grid, steps, dt, dx, seed, sources, amplitude, substeps):
    rng = np.random.default_rng([seed, index])
    solver = YeeSolver(grid, dx, dt, random_sources(rng, grid, dx, sources, amplitude))
    log.debug('maxwell3d trajectory %d: %d sources', index, len(solver.sources))
    frames = []
    for n in range(steps):
        frames.append(_frame(solver.e, solver.h, solver.next_h()))
        if n + 1 < steps:
            for _ in range(substeps):
                solver.step()
    return np.stack(frames)


def gen_maxwell3d(grid=16, trajectories=8, steps=10, dt=None, seed=0, sources=(1, 3),
                  amplitude=(0.5, 1.0), substeps=1, dtype=np.float32, threads=1):
    """Generate Maxwell trajectories on the periodic unit cube.

    :param dt: solver step; defaults to ``COURANT_SAFETY`` times the limit
    :param sources: inclusive range of current sheets per trajectory
    :param substeps: solver steps between stored frames
    """
    if grid < 2 or trajectories < 1 or steps < 1 or substeps < 1:
        raise ValueError('grid, trajectories, steps and substeps must be positive')
    if sources[0] < 0 or sources[1] < sources[0]:
        raise ValueError('invalid source count range {}'.format(sources))
    dx = 1.0 / grid
    if dt is None:
        dt = COURANT_SAFETY * courant_limit(dx)
    if dt > courant_limit(dx):
        raise CourantError('dt={} exceeds the Courant limit {:.6g} for dx={}'.format(
            dt, courant_limit(dx), dx))

    log.info('maxwell3d: %d trajectories of %d steps on %d^3', trajectories, steps, grid)
    data = parallel_map(
        lambda i: _trajectory(i, grid, steps, dt, dx, seed, sources, amplitude, substeps),
        range(trajectories), threads,
    )
    provenance = {
        'generator': 'maxwell3d',
        'params': {
            'grid': grid, 'trajectories': trajectories, 'steps': steps, 'dt': dt,
            'sources': list(sources), 'amplitude': list(amplitude), 'substeps': substeps,
            'units': 'eps0 = mu0 = c = 1',
        },
        'seed': seed,
    }
    return TrajectorySet(np.stack(data).astype(dtype), dt * substeps, (dx, dx, dx), CL30,
                         MAXWELL_PACKING, provenance)
