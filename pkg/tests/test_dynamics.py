import numpy as np
import pytest

from anosov_liouville.constructions import model_defining_pair, verify_defining_pair
from anosov_liouville.dynamics import (
    birkhoff_average,
    default_starts,
    integrate_orbit,
    integrate_orbits,
    lyapunov_cocycle,
    volume_preservation_test,
)
from anosov_liouville.frames import CATMAP_KAPPA, make_sol_suspension, rescale_flow


def test_orbit_positions(sol):
    """`X = d/dt` moves the suspension coordinate at unit speed"""

    orbit = integrate_orbit(sol, [0.25], T=2.0, dt=0.01)
    assert len(orbit) == 201
    np.testing.assert_allclose(orbit.times[-1], 2.0)
    expected = np.mod(0.25 + orbit.times, 1.0)
    # positions close to the period may wrap either way
    distance = np.abs(orbit.positions[:, 0] - expected)
    assert np.all(np.minimum(distance, 1 - distance) <= 1e-12)


@pytest.mark.parametrize("T, dt", [(0.0, 0.01), (1.0, 0.1), (1.0, -0.01)])
def test_invalid_step(sol, T, dt):
    with pytest.raises(ValueError):
        integrate_orbit(sol, [0.0], T, dt)


def test_birkhoff_coboundary(sol):
    """Averages of `X.h` vanish at integer horizons"""

    h = sol.field(lambda t: np.cos(2 * np.pi * t))
    orbit = integrate_orbit(sol, [0.1], T=3.0, dt=0.01)
    assert abs(birkhoff_average(h.derivative(0), orbit)) <= 1e-8
    assert birkhoff_average(sol.constant(2.5), orbit) == pytest.approx(2.5)


def test_default_starts(sol, abelian):
    starts = default_starts(abelian, 5)
    assert starts.shape == (5, 3)
    assert np.all((0 <= starts) & (starts < 1))
    assert len({tuple(s) for s in starts}) == 5
    np.testing.assert_array_equal(default_starts(sol, 3), default_starts(sol, 3))


def test_batch(sol):
    orbits = integrate_orbits(sol, [[0.1], [0.6]], T=1.0, dt=0.01)
    assert [o.x0 for o in orbits] == [(0.1,), (0.6,)]


class TestLyapunov:

    def test_catmap(self, sol, sol_dp):
        """The exponents of the cat-map suspension are `+-kappa`"""

        est = lyapunov_cocycle(sol, sol_dp, T=50.0, dt=1e-3)
        assert est.Lambda_u == pytest.approx(CATMAP_KAPPA, abs=1e-6)
        assert est.Lambda_s == pytest.approx(-CATMAP_KAPPA, abs=1e-6)
        assert est.birkhoff_u == pytest.approx(est.Lambda_u, abs=1e-6)
        assert set(est.to_dict()) == {"x0", "T", "Lambda_u", "Lambda_s", "birkhoff_u", "birkhoff_s"}

    def test_rescaled(self, sol, sol_dp):
        """Rescaling the flow by `c` multiplies the exponents by `c`"""

        model = rescale_flow(sol, 2.0)
        est = lyapunov_cocycle(model, sol_dp.rescaled(model), T=10.0, dt=1e-2)
        assert est.Lambda_u == pytest.approx(2 * CATMAP_KAPPA, abs=1e-6)

    def test_step_convergence(self, sol, sol_dp):
        """With rates `r + X.h` the error of RK4 drops by 16 each time `dt` is halved"""

        h = sol.field(lambda t: 0.1 * np.sin(2 * np.pi * t))
        weight = np.exp(h)
        dp = verify_defining_pair(sol_dp.alpha_s * weight, sol_dp.alpha_u * weight)
        T, x0 = 2.3, [0.25]
        exact = CATMAP_KAPPA + 0.1 * (np.sin(2 * np.pi * (0.25 + T)) - np.sin(2 * np.pi * 0.25)) / T

        estimates = [lyapunov_cocycle(sol, dp, x0=x0, T=T, dt=0.02 / 2**k).Lambda_u for k in range(3)]
        errors = [abs(e - exact) for e in estimates]
        assert errors[2] <= 1e-9
        assert 14 < errors[0] / errors[1] < 18
        assert 14 < (estimates[0] - estimates[1]) / (estimates[1] - estimates[2]) < 18

    def test_sl2(self, sl2, sl2_dp):
        """Models without grid axes have a single point, the exponents are the constant rates"""

        est = lyapunov_cocycle(sl2, sl2_dp, T=5.0, dt=1e-2)
        assert est.Lambda_u == pytest.approx(1.0)
        assert est.Lambda_s == pytest.approx(-1.0)


class TestVolume:

    def test_catmap(self, sol, sol_dp):
        report = volume_preservation_test(sol, sol_dp, n_orbits=3, T=10.0, dt=1e-2)
        assert report.residual <= 1e-10
        assert len(report.averages) == len(report.starts) == 3

    def test_not_preserving(self):
        model = make_sol_suspension(1.0, grid_t=16, kappa_s=0.5)
        dp = model_defining_pair(model)
        report = volume_preservation_test(model, dp, n_orbits=2, T=5.0, dt=1e-2)
        assert report.residual == pytest.approx(0.5)
