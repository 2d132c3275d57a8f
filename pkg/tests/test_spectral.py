import numpy as np
import pytest

from anosov_liouville.spectral import (
    TrigInterpolant,
    finite_difference,
    grid_derivative,
    spectral_derivative,
    spectral_shift,
)


def _samples(n, period=1.0):
    x = period * np.arange(n) / n
    return x, np.exp(np.sin(2 * np.pi * x / period))


@pytest.mark.parametrize("period", [1.0, 2.5])
def test_spectral_derivative(period):
    """Fourier differentiation is exact up to round-off on well-resolved smooth functions"""

    x, f = _samples(64, period)
    expected = 2 * np.pi / period * np.cos(2 * np.pi * x / period) * f
    np.testing.assert_allclose(spectral_derivative(f, 0, period), expected, atol=1e-10)


def test_derivative_along_second_axis():
    x, f = _samples(32)
    values = np.tile(f, (5, 1))
    d = spectral_derivative(values, 1, 1.0)
    np.testing.assert_allclose(d[3], spectral_derivative(f, 0, 1.0), atol=1e-12)


def test_constants():
    assert np.all(spectral_derivative(np.full(16, 3.0), 0, 1.0) == 0)
    assert np.all(finite_difference(np.full(16, 3.0), 0, 1.0) == 0)


def test_finite_difference_order():
    """Halving the spacing divides the error by about 16"""

    errors = []
    for n in (32, 64):
        x = np.arange(n) / n
        f, expected = np.sin(2 * np.pi * x), 2 * np.pi * np.cos(2 * np.pi * x)
        errors.append(np.max(np.abs(finite_difference(f, 0, 1.0) - expected)))
    assert 10 < errors[0] / errors[1] < 20


def test_unknown_scheme():
    with pytest.raises(ValueError):
        grid_derivative(np.zeros(8), 0, 1.0, scheme="chebyshev")


@pytest.mark.parametrize("shift", [0.1, -0.37, 1.0])
def test_shift(shift):
    """Shifting samples evaluates the interpolant at translated points"""

    x, _ = _samples(64)
    f = np.sin(2 * np.pi * x) + 0.5 * np.cos(6 * np.pi * x)
    expected = np.sin(2 * np.pi * (x + shift)) + 0.5 * np.cos(6 * np.pi * (x + shift))
    np.testing.assert_allclose(spectral_shift(f, 0, 1.0, shift), expected, atol=1e-12)


class TestTrigInterpolant:

    def test_off_grid(self):
        x, f = _samples(64)
        interpolant = TrigInterpolant(f, (1.0,), (0.0,))
        points = np.array([[0.013], [0.5001], [0.97]])
        expected = np.exp(np.sin(2 * np.pi * points[:, 0]))
        np.testing.assert_allclose(interpolant(points), expected, atol=1e-10)

    def test_three_axes(self):
        n = 16
        c = np.arange(n) / n
        x, y, z = np.meshgrid(c, c, c, indexing="ij")
        values = np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) + np.sin(2 * np.pi * z)
        interpolant = TrigInterpolant(values, (1.0,) * 3, (0.0,) * 3)
        point = np.array([[0.1, 0.2, 0.3]])
        expected = np.sin(0.2 * np.pi) * np.cos(0.4 * np.pi) + np.sin(0.6 * np.pi)
        assert interpolant(point)[0] == pytest.approx(expected, abs=1e-10)

    def test_origin(self):
        """Samples starting at `origin` are interpolated in absolute coordinates"""

        x = 0.25 + np.arange(32) / 32
        interpolant = TrigInterpolant(np.cos(2 * np.pi * x), (1.0,), (0.25,))
        assert interpolant(np.array([[0.0]]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_constant(self):
        interpolant = TrigInterpolant(np.array(2.0), (), ())
        np.testing.assert_array_equal(interpolant(np.zeros((4, 0))), 2.0)
