#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Derivatives, translations and interpolation of periodic samples
===============================================================

All functions act on one axis of a numpy array sampled on a uniform periodic grid `x_j = origin + j * period / n`.
"""

from typing import Sequence

import numpy as np
from scipy import fft

SCHEMES = ("spectral", "fd")


def _wavenumbers(n: int, period: float) -> np.ndarray:
    """Angular wavenumbers of the real FFT of `n` samples over `period`."""
    return 2 * np.pi * fft.rfftfreq(n, d=period / n)


def _along(vector: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = -1
    return vector.reshape(shape)


def _is_constant(values: np.ndarray) -> bool:
    return values.size == 0 or bool(np.all(values == values.flat[0]))


def spectral_derivative(values: np.ndarray, axis: int, period: float) -> np.ndarray:
    """First derivative along `axis` by Fourier differentiation.

    The Nyquist mode of an even number of samples is dropped, so that the derivative of a real field stays real.

    >>> x = np.arange(8) / 8
    >>> bool(np.allclose(spectral_derivative(np.sin(2 * np.pi * x), 0, 1.0), 2 * np.pi * np.cos(2 * np.pi * x)))
    True
    """
    if _is_constant(values):
        return np.zeros_like(values, dtype=float)

    n = values.shape[axis]
    k = _wavenumbers(n, period)
    multiplier = 1j * k
    if n % 2 == 0:
        multiplier[-1] = 0.0

    coefs = fft.rfft(values, axis=axis)
    return fft.irfft(coefs * _along(multiplier, values.ndim, axis), n=n, axis=axis)


def finite_difference(values: np.ndarray, axis: int, period: float) -> np.ndarray:
    """First derivative along `axis` by 4th-order centred differences."""
    if _is_constant(values):
        return np.zeros_like(values, dtype=float)

    h = period / values.shape[axis]
    forward1, backward1 = np.roll(values, -1, axis=axis), np.roll(values, 1, axis=axis)
    forward2, backward2 = np.roll(values, -2, axis=axis), np.roll(values, 2, axis=axis)
    return (8 * (forward1 - backward1) - (forward2 - backward2)) / (12 * h)


def grid_derivative(values: np.ndarray, axis: int, period: float, scheme: str = "spectral") -> np.ndarray:
    """Dispatch to the derivative `scheme` ('spectral' or 'fd')."""
    if scheme == "spectral":
        return spectral_derivative(values, axis, period)
    elif scheme == "fd":
        return finite_difference(values, axis, period)
    else:
        raise ValueError(f"Unknown derivative scheme {scheme!r}. Available schemes: {SCHEMES}")


def spectral_shift(values: np.ndarray, axis: int, period: float, shift: float) -> np.ndarray:
    """Samples of `x -> f(x + shift)` computed from the trigonometric interpolant of `f`."""
    if _is_constant(values) or shift == 0:
        return np.array(values, dtype=float)

    n = values.shape[axis]
    k = _wavenumbers(n, period)
    multiplier = np.exp(1j * k * shift)
    if n % 2 == 0:
        # symmetric treatment of the Nyquist cosine
        multiplier[-1] = np.cos(k[-1] * shift)

    coefs = fft.rfft(values, axis=axis)
    return fft.irfft(coefs * _along(multiplier, values.ndim, axis), n=n, axis=axis)


class TrigInterpolant:
    """Evaluates the trigonometric interpolant of periodic samples at arbitrary points.

    Parameters
    ----------
    values : np.ndarray
        Samples on the grid, one array axis per periodic coordinate (0-d arrays are constants).

    periods : Sequence[float]
        Period of each axis.

    origin : Sequence[float]
        Coordinate of the first sample on each axis.
    """

    __slots__ = ("constant", "coefs", "wavenumbers", "origin")

    def __init__(self, values: np.ndarray, periods: Sequence[float], origin: Sequence[float]):
        values = np.asarray(values, dtype=float)
        self.origin = np.asarray(origin, dtype=float)
        if _is_constant(values):
            self.constant = float(values.flat[0]) if values.size else 0.0
            self.coefs = None
            self.wavenumbers = ()
        else:
            self.constant = None
            self.coefs = fft.fftn(values) / values.size
            self.wavenumbers = tuple(
                2 * np.pi * fft.fftfreq(n, d=period / n) for n, period in zip(values.shape, periods)
            )

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at `points`, an array of shape (m, ndim). Returns an array of shape (m,)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.constant is not None:
            return np.full(points.shape[0], self.constant)

        local = points - self.origin
        result = np.empty(points.shape[0])
        for start in range(0, points.shape[0], 2048):
            chunk = local[start : start + 2048]
            acc = self.coefs
            # contract the last axis first so that earlier axis numbers stay valid
            for axis in reversed(range(len(self.wavenumbers))):
                phases = np.exp(1j * np.multiply.outer(chunk[:, axis], self.wavenumbers[axis]))
                if axis == len(self.wavenumbers) - 1:
                    acc = np.einsum("...k,mk->m...", acc, phases)
                else:
                    acc = np.einsum("m...k,mk->m...", acc, phases)
            result[start : start + 2048] = np.real(acc)
        return result
