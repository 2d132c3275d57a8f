import numpy as np
import pytest

from anosov_liouville.constructions import (
    SigmaPair,
    balance,
    bicontact_retraction,
    closed_pair_from_volume,
    conformal_action,
    counterexample_pair,
    divergence_cobound_residual,
    extract,
    extract_sigma,
    gauge_action,
    geiges_defining_pair,
    invariants_from_sigma,
    model_defining_pair,
    normalize_volume,
    pair_from_sigma,
    project_to_flow,
    retraction,
    retraction_path,
    skewed_pair,
    standard_invariants,
    standard_pair,
    verify_defining_pair,
)
from anosov_liouville.criteria import ContactFormPair, classify_pair, pair_invariants
from anosov_liouville.errors import (
    NonContact,
    NonPositiveKappa,
    NotAnnihilating,
    NotEigen,
    NotInvariant,
    NotOriented,
    NotProportional,
    OrientationMismatch,
)
from anosov_liouville.forms import coframe, interior_X
from anosov_liouville.frames import CATMAP_KAPPA, X, make_sol_suspension


def _sigma(sol, eps=0.1):
    return sol.field(lambda t: eps * np.sin(2 * np.pi * t))


class TestDefiningPair:

    def test_sol_rates(self, sol_dp):
        """The coframe of the suspension has rates `r_s = -kappa` and `r_u = kappa`"""

        assert sol_dp.r_s.values == pytest.approx(-CATMAP_KAPPA)
        assert sol_dp.r_u.values == pytest.approx(CATMAP_KAPPA)
        assert sol_dp.kind() == "anosov"
        assert sol_dp.is_volume_preserving()
        assert sol_dp.dvol.c.values == pytest.approx(1.0)

    def test_kinds(self):
        """A suspension with different rates is Anosov but does not preserve the coframe volume"""

        dp = model_defining_pair(make_sol_suspension(1.0, grid_t=16, kappa_s=0.5))
        assert dp.kind() == "anosov"
        assert not dp.is_volume_preserving()
        assert (dp.r_u + dp.r_s).values == pytest.approx(0.5)

    def test_abelian(self, abelian):
        assert model_defining_pair(abelian).kind() == "none"

    def test_rescaled_forms(self, sol, sol_dp):
        """Multiplying by a positive function `e^h` adds `X.h` to the rate"""

        h = _sigma(sol)
        dp = verify_defining_pair(sol_dp.alpha_s * np.exp(h), sol_dp.alpha_u * np.exp(-h))
        assert dp.r_s.sup_distance(sol_dp.r_s + h.derivative(X)) <= 1e-10
        assert dp.r_u.sup_distance(sol_dp.r_u - h.derivative(X)) <= 1e-10

    def test_dual_vectors(self, sol_dp):
        e_s, e_u = sol_dp.dual_vectors()
        assert sol_dp.alpha_s(e_s).values == pytest.approx(1)
        assert sol_dp.alpha_s(e_u).values == pytest.approx(0)
        assert sol_dp.alpha_u(e_u).values == pytest.approx(1)

    def test_not_annihilating(self, sol):
        theta0, theta_s, theta_u = coframe(sol)
        with pytest.raises(NotAnnihilating):
            verify_defining_pair(theta_s + theta0, theta_u)

    def test_not_oriented(self, sol):
        _, theta_s, theta_u = coframe(sol)
        with pytest.raises(NotOriented):
            verify_defining_pair(theta_u, theta_s)

    def test_not_eigen(self, sol):
        _, theta_s, theta_u = coframe(sol)
        with pytest.raises(NotEigen):
            verify_defining_pair(theta_s + theta_u * 0.5, theta_u)

    def test_geiges(self, sol_standard, sol_dp):
        """The Geiges pair of a standard pair is twice its defining pair"""

        dp = geiges_defining_pair(sol_standard)
        assert dp.alpha_s.sup_distance(sol_dp.alpha_s * 2) <= 1e-14
        assert dp.alpha_u.sup_distance(sol_dp.alpha_u * 2) <= 1e-14
        assert dp.r_u.sup_distance(sol_dp.r_u) <= 1e-12


def test_standard_invariants(sol_standard, sol_dp, sl2_standard, sl2_dp):
    for pair, dp in ((sol_standard, sol_dp), (sl2_standard, sl2_dp)):
        direct, closed_form = pair_invariants(pair), standard_invariants(dp)
        for (name, a), (_, b) in zip(direct.items(), closed_form.items()):
            assert a.sup_distance(b) <= 1e-12, name


class TestActions:

    def test_gauge(self, sol_standard, sol):
        """`f_0` and `f_- f_+` do not change under the gauge action"""

        before = pair_invariants(sol_standard)
        after = pair_invariants(gauge_action(_sigma(sol), sol_standard))
        assert after.f_zero.sup_distance(before.f_zero) <= 1e-10
        assert (after.f_minus * after.f_plus).sup_distance(before.f_minus * before.f_plus) <= 1e-10

    def test_conformal(self, sol_standard, sol):
        """`f_+-` are unchanged and `f_0` gains `2 k X.sigma` with `k = 2` on standard pairs"""

        sigma = _sigma(sol)
        inv = pair_invariants(conformal_action(sigma, sol_standard))
        assert inv.f_plus.sup_distance(2 * CATMAP_KAPPA) <= 1e-10
        assert inv.f_zero.sup_distance(4 * sigma.derivative(X)) <= 1e-10

    def test_conformal_constant(self, sol_standard):
        scaled = conformal_action(0.5, sol_standard)
        assert scaled.alpha_plus.sup_distance(sol_standard.alpha_plus * np.exp(0.5)) <= 1e-14

    def test_balance(self, sol_standard):
        """Doubling `alpha_+` of a balanced pair is undone by `sigma = -ln(2) / 2`"""

        pair = ContactFormPair(sol_standard.alpha_minus, sol_standard.alpha_plus * 2, sol_standard.dvol)
        sigma, balanced = balance(pair)
        assert sigma.values == pytest.approx(-0.5 * np.log(2))
        assert classify_pair(pair_invariants(balanced))["balanced"].flag

        again, rebalanced = balance(balanced)
        assert again.abs_max() <= 1e-14
        assert rebalanced.sup_distance(balanced) <= 1e-14

    def test_balance_already_balanced(self, sol_standard):
        sigma, _ = balance(sol_standard)
        assert sigma.abs_max() == 0

    def test_balance_non_contact(self, sol_standard):
        with pytest.raises(NonContact):
            balance(ContactFormPair(sol_standard.alpha_plus, sol_standard.alpha_minus, sol_standard.dvol))

    def test_normalize(self, sol_standard):
        normalized = normalize_volume(sol_standard)
        assert normalized.dvol.c.values == pytest.approx(2.0)
        with pytest.raises(NotOriented):
            normalize_volume(ContactFormPair(sol_standard.alpha_plus, sol_standard.alpha_minus))

    def test_project(self, sol_standard):
        theta0 = coframe(sol_standard.manifold)[0]
        leaky = ContactFormPair(sol_standard.alpha_minus + theta0, sol_standard.alpha_plus, sol_standard.dvol)
        assert project_to_flow(leaky).sup_distance(sol_standard) == 0


class TestSigma:

    def test_counterexample(self, sol_dp):
        """The counterexample has `(sigma_s, sigma_u) = (-A, A)`"""

        pair = counterexample_pair(1.0, sol_dp)
        sig = extract_sigma(pair, sol_dp)
        assert sig.sigma_s.sup_distance(-1.0) <= 1e-10
        assert sig.sigma_u.sup_distance(1.0) <= 1e-10

    def test_invariants_from_sigma(self, sol_dp):
        """Closed-form invariants match the direct ones against the extracted volume"""

        pair = counterexample_pair(1.0, sol_dp)
        sig, dp = extract(pair, sol_dp)
        direct = pair_invariants(pair.with_dvol(dp.dvol))
        f_plus, f_minus, f_zero = invariants_from_sigma(sig, dp)
        assert f_plus.sup_distance(direct.f_plus) <= 1e-9
        assert f_minus.sup_distance(direct.f_minus) <= 1e-9
        assert f_zero.sup_distance(direct.f_zero) <= 1e-9

    def test_standard_is_trivial(self, sol_standard, sol_dp):
        """A standard pair has `sigma = 0` and gives back its defining pair"""

        sig, dp = extract(sol_standard, sol_dp)
        assert sig.sigma_s.abs_max() <= 1e-14
        assert sig.sigma_u.abs_max() <= 1e-14
        assert dp.alpha_s.sup_distance(sol_dp.alpha_s) <= 1e-14
        assert dp.alpha_u.sup_distance(sol_dp.alpha_u) <= 1e-14

    def test_roundtrip(self, sol, sol_dp):
        sig = SigmaPair(_sigma(sol, 0.2), sol.field(lambda t: 0.1 * np.cos(2 * np.pi * t)))
        pair = pair_from_sigma(sig, sol_dp)
        extracted, dp = extract(pair, sol_dp)
        assert extracted.sigma_s.sup_distance(sig.sigma_s) <= 1e-10
        assert extracted.sigma_u.sup_distance(sig.sigma_u) <= 1e-10
        assert pair_from_sigma(extracted, dp).sup_distance(pair) <= 1e-10

    def test_slack(self, sol, sol_dp):
        sig = SigmaPair(sol.zeros(), _sigma(sol, 0.1))
        expected = 2 * CATMAP_KAPPA - np.abs(0.2 * np.pi * np.cos(2 * np.pi * sol.grid.mesh()["t"]))
        np.testing.assert_allclose(sig.slack(sol_dp).values, expected, atol=1e-10)

    def test_orientation_mismatch(self, sol_standard, sol_dp):
        with pytest.raises(OrientationMismatch):
            extract_sigma(sol_standard.flipped(), sol_dp)


class TestRetraction:

    def test_end_points(self, sol_dp):
        pair = counterexample_pair(1.0, sol_dp)
        sig, dp = extract(pair, sol_dp)
        assert retraction(pair, 0.0, sol_dp).sup_distance(pair) <= 1e-12
        end = retraction(pair, 1.0, sol_dp)
        assert end.sup_distance(standard_pair(dp)) <= 1e-9
        assert classify_pair(pair_invariants(end))["balanced"].flag

    def test_monotone(self, sol, sol_dp):
        """The AL margin does not decrease along the retraction"""

        pair = pair_from_sigma(SigmaPair(_sigma(sol, 0.1), _sigma(sol, -0.05)), sol_dp)
        margins = [classify_pair(pair_invariants(p))["AL"].value for _, p in retraction_path(pair, sol_dp, 33)]
        assert np.all(np.diff(margins) >= -1e-9)

    def test_constant_on_standard(self, sol_standard, sol_dp):
        for _, p in retraction_path(sol_standard, sol_dp, 5):
            assert p.sup_distance(sol_standard) <= 1e-14

    @pytest.mark.parametrize("t", [-0.1, 1.5])
    def test_range(self, sol_standard, sol_dp, t):
        with pytest.raises(ValueError):
            retraction(sol_standard, t, sol_dp)

    def test_bicontact(self, sol_dp):
        """The single-function retraction ends on a standard pair and starts from the normalised pair"""

        pair = skewed_pair(0.5, sol_dp)
        end = bicontact_retraction(pair, sol_dp, 1.0)
        inv = pair_invariants(end)
        assert inv.f_plus.sup_distance(inv.f_minus) <= 1e-10
        start = bicontact_retraction(pair, sol_dp, 0.0)
        assert start.sup_distance(pair) <= 1e-10


class TestClosedPairs:

    def test_from_volume(self, sol, sol_dp):
        """Rescaling by `kappa` with `alpha_- ^ alpha_+ = kappa tau` gives a closed pair"""

        pair = gauge_action(_sigma(sol), standard_pair(sol_dp))
        pair = ContactFormPair(pair.alpha_minus, pair.alpha_plus * np.exp(_sigma(sol, 0.3)), pair.dvol)
        closed = closed_pair_from_volume(pair, interior_X(sol_dp.dvol))
        assert classify_pair(pair_invariants(closed))["closed"].flag

    def test_not_invariant(self):
        model = make_sol_suspension(1.0, grid_t=16, kappa_s=0.5)
        dp = model_defining_pair(model)
        with pytest.raises(NotInvariant):
            closed_pair_from_volume(standard_pair(dp), interior_X(dp.dvol))

    def test_negative_kappa(self, sol_standard, sol_dp):
        flipped = sol_standard.flipped()
        with pytest.raises(NonPositiveKappa):
            closed_pair_from_volume(flipped, interior_X(sol_dp.dvol))

    def test_not_proportional(self, sol, sol_standard, sol_dp):
        """A flow component in `alpha_+` puts `theta0` terms in `alpha_- ^ alpha_+`, which `tau` does not have"""

        theta0 = coframe(sol)[0]
        tilted = sol_standard.alpha_plus + theta0 * sol.field(lambda t: 0.1 + 0.05 * np.cos(2 * np.pi * t))
        pair = ContactFormPair(sol_standard.alpha_minus, tilted, sol_standard.dvol)
        with pytest.raises(NotProportional, match="not a multiple of tau"):
            closed_pair_from_volume(pair, interior_X(sol_dp.dvol))

        closed = closed_pair_from_volume(project_to_flow(pair), interior_X(sol_dp.dvol))
        assert classify_pair(pair_invariants(closed))["closed"].flag

    def test_cobound(self, sol_dp):
        assert divergence_cobound_residual(sol_dp.manifold.zeros(), sol_dp) <= 1e-14

    def test_cobound_sine(self, sol, sol_dp):
        """On the cat map the residual of `h` is `max |X.h|`"""

        h = sol.field(lambda t: np.sin(2 * np.pi * t))
        assert divergence_cobound_residual(h, sol_dp) == pytest.approx(2 * np.pi, abs=1e-8)

    @pytest.mark.parametrize("h", [
        lambda t: 0 * t,
        lambda t: 0.3 * np.sin(2 * np.pi * t),
        lambda t: 0.05 * np.cos(4 * np.pi * t) - 0.1 * np.sin(6 * np.pi * t),
    ])
    def test_cobound_obstruction(self, h):
        """A constant `r_u + r_s = c` is not a derivative along the flow: every periodic `h` leaves at least `|c|`"""

        model = make_sol_suspension(1.2, grid_t=32, kappa_s=0.8)
        dp = model_defining_pair(model)
        assert (dp.r_u + dp.r_s).sup_distance(0.4) <= 1e-12
        assert divergence_cobound_residual(model.field(h), dp) >= 0.4 - 1e-12


def test_counterexample_invariants(sol_dp):
    """`f_+- = 2 r_u` and `g_+- = -2 sinh(2A) r_u`"""

    inv = pair_invariants(counterexample_pair(1.0, sol_dp))
    assert inv.f_plus.sup_distance(2 * CATMAP_KAPPA) <= 1e-10
    assert inv.f_minus.sup_distance(2 * CATMAP_KAPPA) <= 1e-10
    assert inv.g_plus.sup_distance(-2 * np.sinh(2) * CATMAP_KAPPA) <= 1e-10
    assert inv.g_minus.sup_distance(-2 * np.sinh(2) * CATMAP_KAPPA) <= 1e-10


def test_skewed_is_al(sol_dp):
    inv = pair_invariants(skewed_pair(0.5, sol_dp))
    assert classify_pair(inv)["AL"].flag
    assert not classify_pair(inv)["balanced"].flag
