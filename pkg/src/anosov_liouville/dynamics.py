#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Orbits and ergodic averages
===========================

Orbits of the flow of `X` are integrated in grid coordinates with the classical 4th-order Runge-Kutta method, the
velocity being the trigonometric interpolant of the grid samples. Since the splitting of every model is frame
diagonal, the growth of stable and unstable vectors along an orbit is the time integral of the expansion rates.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from . import compat
from .constructions import DefiningPair
from .frames import FrameManifold, ScalarField
from .spectral import TrigInterpolant
from .utils import gen_repr

logger = compat.getLogger("dynamics")

GOLDEN = (np.sqrt(5) - 1) / 2


class OrbitSample:
    """Positions of one orbit at times `0, dt, ..., T`, reduced modulo the grid periods."""

    __slots__ = ("model", "x0", "dt", "T", "times", "positions")

    __repr__ = gen_repr(hide=("model", "times", "positions"))

    def __init__(self, model: FrameManifold, x0, dt: float, T: float, times: np.ndarray, positions: np.ndarray):
        self.model = model
        self.x0 = tuple(float(c) for c in x0)
        self.dt = dt
        self.T = T
        self.times = times
        self.positions = positions

    def __len__(self):
        return len(self.times)

    def sample(self, field: ScalarField) -> np.ndarray:
        """Values of `field` along the orbit."""
        return _interpolant(field.values, self.model)(self.positions)


def _interpolant(values: np.ndarray, model: FrameManifold) -> TrigInterpolant:
    return TrigInterpolant(values, model.grid.periods, model.grid.origin)


def _check_step(T: float, dt: float):
    if not (T > 0 and 0 < dt <= 1e-2 * T):
        raise ValueError(f"Orbit integration needs T > 0 and 0 < dt <= T / 100, got T={T}, dt={dt}")


def _integrate(model: FrameManifold, starts: np.ndarray, T: float, dt: float, rates: Sequence[ScalarField] = ()):
    """RK4 on the state `(x, int r_1, ..., int r_k)` for a batch of starting points.

    Returns the positions, of shape `(n_steps + 1, n_orbits, ndim)`, and the integrals of `rates` at time `T`, of
    shape `(k, n_orbits)`.
    """
    n_steps = int(round(T / dt))
    ndim = model.grid.ndim
    velocity = [_interpolant(v, model) for v in model.flow_velocity()]
    rate_fns = [_interpolant(r.values, model) for r in rates]

    def flow(x):
        return np.stack([v(x) for v in velocity], axis=-1) if ndim else x

    def growth(x):
        return np.stack([r(x) for r in rate_fns]) if rate_fns else np.zeros((0, len(x)))

    x = np.array(starts, dtype=float)
    logs = np.zeros((len(rate_fns), len(x)))
    history = np.empty((n_steps + 1,) + x.shape)
    history[0] = x
    for step in tqdm(range(n_steps), desc="orbits... ", leave=False, mininterval=1.0, disable=None):
        k1, l1 = flow(x), growth(x)
        k2, l2 = flow(x + 0.5 * dt * k1), growth(x + 0.5 * dt * k1)
        k3, l3 = flow(x + 0.5 * dt * k2), growth(x + 0.5 * dt * k2)
        k4, l4 = flow(x + dt * k3), growth(x + dt * k3)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        logs = logs + dt / 6 * (l1 + 2 * l2 + 2 * l3 + l4)
        history[step + 1] = x

    if ndim:
        history = np.mod(history, np.asarray(model.grid.periods))
    return history, logs


def integrate_orbits(model: FrameManifold, starts, T: float, dt: float) -> List[OrbitSample]:
    """Integrate the flow of `X` from several starting points at once."""
    _check_step(T, dt)
    starts = np.array(starts, dtype=float).reshape(len(starts), model.grid.ndim)
    history, _ = _integrate(model, starts, T, dt)
    times = dt * np.arange(history.shape[0])
    return [OrbitSample(model, starts[i], dt, T, times, history[:, i, :]) for i in range(len(starts))]


def integrate_orbit(model: FrameManifold, x0, T: float, dt: float) -> OrbitSample:
    """Integrate the flow of `X` from `x0` (grid coordinates, one per axis) up to time `T` with step `dt`.

    Raises `ValueError` unless `0 < dt <= T / 100`.
    """
    return integrate_orbits(model, [x0], T, dt)[0]


def birkhoff_average(field: ScalarField, orbit: OrbitSample) -> float:
    """`1/T int_0^T field(phi^t x0) dt`, with the trapezoidal rule on the orbit samples."""
    return float(compat.trapezoid(orbit.sample(field), orbit.times) / orbit.times[-1])


def default_starts(model: FrameManifold, n_orbits: int) -> np.ndarray:
    """Deterministic, well spread starting points: golden-ratio offsets along every axis."""
    grid = model.grid
    k = np.arange(1, n_orbits + 1)[:, None]
    frac = np.mod(k * GOLDEN * (1 + np.arange(grid.ndim))[None, :], 1.0)
    return np.asarray(grid.origin) + frac * np.asarray(grid.periods)


class LyapunovEstimate:
    """Exponents from the integrated growth of stable and unstable vectors, and the matching Birkhoff averages."""

    __slots__ = ("x0", "T", "Lambda_u", "Lambda_s", "birkhoff_u", "birkhoff_s")

    __repr__ = gen_repr()

    def __init__(self, x0, T, Lambda_u, Lambda_s, birkhoff_u, birkhoff_s):
        self.x0 = x0
        self.T = T
        self.Lambda_u = Lambda_u
        self.Lambda_s = Lambda_s
        self.birkhoff_u = birkhoff_u
        self.birkhoff_s = birkhoff_s

    def to_dict(self) -> Dict:
        return {k: getattr(self, k) for k in self.__slots__}


def lyapunov_cocycle(
    model: FrameManifold, dp: DefiningPair, x0=None, T: float = 50.0, dt: float = 1e-3
) -> LyapunovEstimate:
    """Integrate `d/dt log |w_u| = r_u` and `d/dt log |w_s| = r_s` along the orbit of `x0` together with the orbit.

    Returns `(Lambda_u, Lambda_s) = (log |w_u(T)| / T, log |w_s(T)| / T)`, and the Birkhoff averages of `r_u` and
    `r_s` along the same orbit, which must agree.
    """
    _check_step(T, dt)
    if x0 is None:
        x0 = default_starts(model, 1)[0]
    starts = np.array(x0, dtype=float).reshape(1, model.grid.ndim)
    history, logs = _integrate(model, starts, T, dt, rates=(dp.r_u, dp.r_s))
    orbit = OrbitSample(model, starts[0], dt, T, dt * np.arange(history.shape[0]), history[:, 0, :])
    estimate = LyapunovEstimate(
        tuple(float(c) for c in starts[0]),
        T,
        float(logs[0, 0] / T),
        float(logs[1, 0] / T),
        birkhoff_average(dp.r_u, orbit),
        birkhoff_average(dp.r_s, orbit),
    )
    logger.debug("Lyapunov exponents from %s: %s", estimate.x0, estimate)
    return estimate


class VolumeReport:
    """Largest `|1/T int (r_u + r_s)|` over a set of orbits."""

    __slots__ = ("residual", "averages", "starts", "T")

    __repr__ = gen_repr(show=("residual", "T"))

    def __init__(self, residual: float, averages: List[float], starts: List, T: float):
        self.residual = residual
        self.averages = averages
        self.starts = starts
        self.T = T

    def to_dict(self) -> Dict:
        return {k: getattr(self, k) for k in self.__slots__}


def volume_preservation_test(
    model: FrameManifold,
    dp: DefiningPair,
    n_orbits: int = 4,
    T: float = 50.0,
    dt: float = 1e-3,
    field: Optional[ScalarField] = None,
) -> VolumeReport:
    """Birkhoff averages of `r_u + r_s` (the divergence of `X` for the volume of `dp`, up to sign) over `n_orbits`
    deterministic orbits. `field` replaces `r_u + r_s` when given.
    """
    field = dp.r_u + dp.r_s if field is None else field
    starts = default_starts(model, n_orbits)
    orbits = integrate_orbits(model, starts, T, dt)
    averages = [birkhoff_average(field, orbit) for orbit in orbits]
    residual = max(abs(a) for a in averages)
    logger.info("volume preservation residual over %d orbits: %.3g", n_orbits, residual)
    return VolumeReport(residual, averages, [orbit.x0 for orbit in orbits], T)
