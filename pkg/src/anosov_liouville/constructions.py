#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Constructions of pairs
======================

Everything that produces or transforms a `ContactFormPair`: defining pairs of the weak stable and unstable bundles,
the standard pair they induce, the gauge and conformal actions, balancing, the extraction of the functions
`(sigma_s, sigma_u)` that measure how far an AL pair is from a standard one, and the retractions that remove them.
"""

from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import optimize
from tqdm import tqdm

from . import compat
from .criteria import TAU_POS, ContactFormPair, PairInvariants, check_contact, classify_pair, pair_invariants
from .errors import NearDegenerateVolume, NonPositiveKappa, NotAnnihilating, NotEigen, NotInvariant, NotOriented
from .errors import NotProportional, OrientationMismatch
from .forms import OneForm, ThreeForm, TwoForm, VectorField, coframe, lie_X, wedge_1_1
from .frames import FrameManifold, ScalarField, X
from .utils import gen_repr

logger = compat.getLogger("constructions")

Sigma = Union[ScalarField, float]

ANNIHILATION_TOL = 1e-12
EIGEN_RESIDUAL = 1e-9
COMPONENT_TOL = 1e-8
VOLUME_PRESERVING_TOL = 1e-9

KINDS = ("anosov", "semi_anosov", "projectively_anosov", "none")


def _exp(sigma: Sigma, manifold: FrameManifold) -> ScalarField:
    if isinstance(sigma, ScalarField):
        return np.exp(sigma)
    return manifold.constant(float(np.exp(sigma)))


class DefiningPair:
    """A pair of 1-forms `(alpha_s, alpha_u)` vanishing on `X` with `L_X alpha_s = r_s alpha_s` and
    `L_X alpha_u = r_u alpha_u`.

    Build it with `verify_defining_pair`, which computes the rates and checks the eigen-equations.
    """

    __slots__ = ("alpha_s", "alpha_u", "r_s", "r_u", "residual")

    __repr__ = gen_repr(show=("r_s", "r_u", "residual"))

    def __init__(self, alpha_s: OneForm, alpha_u: OneForm, r_s: ScalarField, r_u: ScalarField, residual: float):
        self.alpha_s = alpha_s
        self.alpha_u = alpha_u
        self.r_s = r_s
        self.r_u = r_u
        self.residual = residual

    @property
    def manifold(self) -> FrameManifold:
        return self.alpha_s.manifold

    @property
    def dvol(self) -> ThreeForm:
        """The volume with `i_X dvol = alpha_s ^ alpha_u`."""
        return ThreeForm(wedge_1_1(self.alpha_s, self.alpha_u).bsu)

    def kind(self) -> str:
        """The most specific of 'anosov' (`r_s < 0 < r_u`), 'semi_anosov' (`r_s < r_u` and `0 < r_u`),
        'projectively_anosov' (`r_s < r_u`) or 'none'."""
        if (self.r_u - self.r_s).min() <= 0:
            return "none"
        if self.r_u.min() <= 0:
            return "projectively_anosov"
        if self.r_s.max() >= 0:
            return "semi_anosov"
        return "anosov"

    def is_volume_preserving(self, tol: float = VOLUME_PRESERVING_TOL) -> bool:
        return (self.r_u + self.r_s).abs_max() <= tol

    def dual_vectors(self) -> Tuple[VectorField, VectorField]:
        """The vectors `(E_s, E_u)` in the plane of `(e_s, e_u)` with `alpha_i(E_j) = delta_ij`."""
        ss, su = self.alpha_s.a_s, self.alpha_s.a_u
        us, uu = self.alpha_u.a_s, self.alpha_u.a_u
        det = ss * uu - su * us
        zero = self.manifold.zeros()
        return VectorField(zero, uu / det, -us / det), VectorField(zero, -su / det, ss / det)

    def rescaled(self, manifold: FrameManifold) -> "DefiningPair":
        """The same forms, verified again on `manifold` (a model sharing the grid, typically a rescaled flow)."""
        return verify_defining_pair(self.alpha_s.on(manifold), self.alpha_u.on(manifold))


def _eigen_rate(form: OneForm, lie: OneForm, component_tol: float) -> Tuple[np.ndarray, float]:
    """Pointwise least-squares `r` in `lie = r form` over the significant components, and the worst residual."""
    a = np.stack([c.values for c in form.components])
    la = np.stack([c.values for c in lie.components])
    mask = np.abs(a) > component_tol
    den = np.sum(np.where(mask, a * a, 0.0), axis=0)
    num = np.sum(np.where(mask, a * la, 0.0), axis=0)
    if np.any(den == 0):
        raise NotEigen("A form of the defining pair vanishes somewhere")
    rate = num / den
    residual = float(np.max(np.abs(la - rate * a)))
    return rate, residual


def verify_defining_pair(
    alpha_s: OneForm,
    alpha_u: OneForm,
    annihilation_tol: float = ANNIHILATION_TOL,
    residual_tol: float = EIGEN_RESIDUAL,
    component_tol: float = COMPONENT_TOL,
) -> DefiningPair:
    """Check that `(alpha_s, alpha_u)` is a defining pair and compute its expansion rates.

    Parameters
    ----------
    alpha_s, alpha_u : OneForm
        Candidate forms. They must vanish on `X` and `alpha_s ^ alpha_u` must be positive on `(e_s, e_u)`.

    annihilation_tol : float
        Largest accepted `|alpha(X)|`.

    residual_tol : float
        Largest accepted componentwise residual of `L_X alpha = r alpha`.

    component_tol : float
        Coefficients with smaller absolute value are ignored when fitting the rate.

    Raises
    ------
    NotAnnihilating, NotOriented, NotEigen
    """
    for name, form in (("alpha_s", alpha_s), ("alpha_u", alpha_u)):
        leak = form.a0.abs_max()
        if leak > annihilation_tol:
            raise NotAnnihilating(f"{name} does not vanish on X: max |{name}(X)| = {leak:.3g}")

    orientation = wedge_1_1(alpha_s, alpha_u).bsu
    if orientation.min() <= 0:
        where = orientation.manifold.grid.point(orientation.argmin())
        raise NotOriented(f"alpha_s ^ alpha_u is not positive on (e_s, e_u) at {where}")

    m = alpha_s.manifold
    rates, worst = [], 0.0
    for name, form in (("alpha_s", alpha_s), ("alpha_u", alpha_u)):
        rate, residual = _eigen_rate(form, lie_X(form), component_tol)
        if residual > residual_tol:
            raise NotEigen(f"L_X {name} is not a multiple of {name}: residual {residual:.3g} > {residual_tol:.3g}")
        rates.append(ScalarField(rate, m))
        worst = max(worst, residual)

    dp = DefiningPair(alpha_s, alpha_u, rates[0], rates[1], worst)
    logger.debug(
        "defining pair on %s: r_s in [%.6g, %.6g], r_u in [%.6g, %.6g]",
        m.name,
        dp.r_s.min(),
        dp.r_s.max(),
        dp.r_u.min(),
        dp.r_u.max(),
    )
    return dp


def model_defining_pair(manifold: FrameManifold) -> DefiningPair:
    """The defining pair `(theta_s, theta_u)` of a model's coframe."""
    _, theta_s, theta_u = coframe(manifold)
    return verify_defining_pair(theta_s, theta_u)


def standard_pair(dp: DefiningPair) -> ContactFormPair:
    """`(alpha_u + alpha_s, alpha_u - alpha_s)` with the volume of `dp`.

    Its invariants are `f_+ = f_- = r_u - r_s`, `g_- = -g_+ = r_u + r_s` and `f_0 = 2 (r_u + r_s)`.
    """
    if dp.kind() == "none":
        logger.warning("r_u - r_s is not positive: the standard pair is not made of contact forms")
    return ContactFormPair(dp.alpha_u + dp.alpha_s, dp.alpha_u - dp.alpha_s, dp.dvol)


def geiges_defining_pair(pair: ContactFormPair) -> DefiningPair:
    """`(alpha_- - alpha_+, alpha_- + alpha_+)`, verified as a defining pair.

    For a standard pair this is `(2 alpha_s, 2 alpha_u)`.
    """
    return verify_defining_pair(pair.alpha_minus - pair.alpha_plus, pair.alpha_minus + pair.alpha_plus)


def gauge_action(sigma: Sigma, pair: ContactFormPair) -> ContactFormPair:
    """`(e^-sigma alpha_-, e^sigma alpha_+)`, against the same volume."""
    e = _exp(sigma, pair.manifold)
    return ContactFormPair(pair.alpha_minus / e, pair.alpha_plus * e, pair.dvol)


def conformal_action(sigma: Sigma, pair: ContactFormPair) -> ContactFormPair:
    """`(e^sigma alpha_-, e^sigma alpha_+)`, against the volume `e^2sigma dvol`.

    The kernels do not change. With `alpha_- ^ alpha_+ = k i_X dvol`, `f_+-` are unchanged and `f_0` becomes
    `f_0 + 2 k X.sigma`.
    """
    e = _exp(sigma, pair.manifold)
    return ContactFormPair(pair.alpha_minus * e, pair.alpha_plus * e, ThreeForm(pair.dvol.c * e * e))


def conformal_threshold(
    pair: ContactFormPair, profile: ScalarField, upper: float = 1.0, tol: float = TAU_POS, xtol: float = 1e-10
) -> float:
    """The amplitude `eps` at which `conformal_action(eps * profile, pair)` stops being AL.

    The AL margin is followed with `scipy.optimize.brentq` on `[0, upper]`.

    Raises
    ------
    ValueError
        If the pair is not AL, or is still AL at `eps = upper`.
    """

    def al_margin(eps):
        inv = pair_invariants(conformal_action(eps * profile, pair))
        return classify_pair(inv, tol)["AL"].value

    lower_margin, upper_margin = al_margin(0.0), al_margin(upper)
    if not lower_margin > 0 > upper_margin:
        raise ValueError(
            f"AL margin must change sign on [0, {upper}], got {lower_margin:.6g} and {upper_margin:.6g}"
        )
    eps = optimize.brentq(al_margin, 0.0, upper, xtol=xtol)
    logger.info("conformal threshold %.10g", eps)
    return eps


def normalize_volume(pair: ContactFormPair, threshold: float = 1e-12) -> ContactFormPair:
    """The same forms, against the volume with `i_X dvol = alpha_- ^ alpha_+`."""
    k = pair.wedge().bsu
    if k.min() <= threshold:
        raise NotOriented(f"alpha_- ^ alpha_+ is not positive on (e_s, e_u) (min {k.min():.3g})")
    return pair.with_dvol(ThreeForm(k))


def balance(pair: ContactFormPair, inv: Optional[PairInvariants] = None) -> Tuple[ScalarField, ContactFormPair]:
    """Return `(sigma, gauge_action(sigma, pair))` with `sigma = ln(f_- / f_+) / 4`, the unique balanced pair
    equivalent to `pair`.

    Raises
    ------
    NonContact
        If either form is not a contact form of its sign.
    """
    inv = check_contact(pair, inv)
    sigma = 0.25 * np.log(inv.f_minus / inv.f_plus)
    return sigma, gauge_action(sigma, pair)


# ------------ sigma extraction


class SigmaPair:
    """The functions `(sigma_s, sigma_u)` of an AL pair relative to its defining pair, and `sigma = sigma_u -
    sigma_s`."""

    __slots__ = ("sigma_s", "sigma_u")

    __repr__ = gen_repr()

    def __init__(self, sigma_s: ScalarField, sigma_u: ScalarField):
        self.sigma_s = sigma_s
        self.sigma_u = sigma_u

    @property
    def sigma(self) -> ScalarField:
        return self.sigma_u - self.sigma_s

    def scaled(self, c: float) -> "SigmaPair":
        return SigmaPair(self.sigma_s * c, self.sigma_u * c)

    def slack(self, dp: DefiningPair) -> ScalarField:
        """`r_u - r_s - |X.sigma|`, positive when `sigma` is admissible for `dp`."""
        return dp.r_u - dp.r_s - np.abs(self.sigma.derivative(X))


def _half_log_ratio(num: ScalarField, den: ScalarField, what: str) -> ScalarField:
    if (num * den).min() <= 0:
        raise OrientationMismatch(f"{what} is not positive everywhere: the pair does not match the splitting")
    return 0.5 * np.log(num / den)


def extract_sigma(pair: ContactFormPair, dp_directions: DefiningPair) -> SigmaPair:
    """Solve `sigma_s = ln(alpha_-(E_u) / alpha_+(E_u)) / 2` and `sigma_u = ln(-alpha_-(E_s) / alpha_+(E_s)) / 2`.

    Only the directions `E_s, E_u` dual to `dp_directions` matter, not their normalisation.

    Raises
    ------
    OrientationMismatch
        If a logarithm has a non-positive argument.
    """
    e_s, e_u = dp_directions.dual_vectors()
    am, ap = pair.alpha_minus, pair.alpha_plus
    sigma_s = _half_log_ratio(am(e_u), ap(e_u), "alpha_-(E_u) / alpha_+(E_u)")
    sigma_u = _half_log_ratio(-am(e_s), ap(e_s), "-alpha_-(E_s) / alpha_+(E_s)")
    return SigmaPair(sigma_s, sigma_u)


def extract_defining_pair(pair: ContactFormPair, sig: SigmaPair) -> DefiningPair:
    """The defining pair of an AL pair:

        alpha_u = (e^-sigma_u alpha_- + e^sigma_u alpha_+) / (2 sqrt(cosh sigma))
        alpha_s = (e^-sigma_s alpha_- - e^sigma_s alpha_+) / (2 sqrt(cosh sigma))
    """
    norm = 2 * np.sqrt(np.cosh(sig.sigma))
    am, ap = pair.alpha_minus, pair.alpha_plus
    alpha_u = (am * np.exp(-sig.sigma_u) + ap * np.exp(sig.sigma_u)) / norm
    alpha_s = (am * np.exp(-sig.sigma_s) - ap * np.exp(sig.sigma_s)) / norm
    return verify_defining_pair(alpha_s, alpha_u)


def pair_from_sigma(sig: SigmaPair, dp: DefiningPair) -> ContactFormPair:
    """Rebuild an AL pair from its defining pair and `(sigma_s, sigma_u)`, against the volume of `dp`.

        alpha_- = (e^sigma_s alpha_u + e^sigma_u alpha_s) / sqrt(cosh sigma)
        alpha_+ = (e^-sigma_s alpha_u - e^-sigma_u alpha_s) / sqrt(cosh sigma)
    """
    norm = np.sqrt(np.cosh(sig.sigma))
    alpha_minus = (dp.alpha_u * np.exp(sig.sigma_s) + dp.alpha_s * np.exp(sig.sigma_u)) / norm
    alpha_plus = (dp.alpha_u * np.exp(-sig.sigma_s) - dp.alpha_s * np.exp(-sig.sigma_u)) / norm
    return ContactFormPair(alpha_minus, alpha_plus, dp.dvol)


def invariants_from_sigma(sig: SigmaPair, dp: DefiningPair) -> Tuple[ScalarField, ScalarField, ScalarField]:
    """`(f_+, f_-, f_0)` of `pair_from_sigma(sig, dp)` in closed form."""
    x_sigma = sig.sigma.derivative(X)
    gap = dp.r_u - dp.r_s
    cosh = np.cosh(sig.sigma)
    total = sig.sigma_s + sig.sigma_u
    f_plus = np.exp(-total) / cosh * (x_sigma + gap)
    f_minus = np.exp(total) / cosh * (gap - x_sigma)
    f_zero = 2 * (dp.r_u + dp.r_s)
    return f_plus, f_minus, f_zero


# ------------ retractions


def retraction(
    pair: ContactFormPair,
    t: float,
    dp_directions: DefiningPair,
    extracted: Optional[Tuple[SigmaPair, DefiningPair]] = None,
) -> ContactFormPair:
    """The pair obtained by scaling `(sigma_s, sigma_u)` by `1 - t`.

    `t = 0` gives back `pair` and `t = 1` the standard pair of its defining pair. Results are measured against the
    volume of the extracted defining pair.
    """
    if not 0 <= t <= 1:
        raise ValueError(f"Retraction parameter must be in [0, 1], got {t}")
    if extracted is None:
        extracted = extract(pair, dp_directions)
    sig, dp = extracted
    return pair_from_sigma(sig.scaled(1 - t), dp)


def extract(pair: ContactFormPair, dp_directions: DefiningPair) -> Tuple[SigmaPair, DefiningPair]:
    """`extract_sigma` followed by `extract_defining_pair`."""
    sig = extract_sigma(pair, dp_directions)
    return sig, extract_defining_pair(pair, sig)


def retraction_path(
    pair: ContactFormPair, dp_directions: DefiningPair, n_samples: int = 33
) -> List[Tuple[float, ContactFormPair]]:
    """The retraction sampled at `n_samples` equally spaced `t` in `[0, 1]`."""
    extracted = extract(pair, dp_directions)
    path = []
    for t in tqdm(np.linspace(0.0, 1.0, n_samples), desc="retraction... ", leave=False, disable=None):
        path.append((float(t), retraction(pair, float(t), dp_directions, extracted)))
    return path


def bicontact_retraction(pair: ContactFormPair, dp_directions: DefiningPair, t: float) -> ContactFormPair:
    """Retraction of a bi-contact pair (no AL assumption) onto a standard-like pair, through a single function.

    Both forms are first normalised by `alpha_+-(E_u) = 1`; with `sigma = ln(-alpha_-(E_s) / alpha_+(E_s)) / 2`,
    `alpha_u = (e^-sigma alpha_- + e^sigma alpha_+) / (2 cosh sigma)` and `alpha_s = (alpha_- - alpha_+) /
    (2 cosh sigma)`, the result is `(alpha_u + e^((1-t) sigma) alpha_s, alpha_u - e^(-(1-t) sigma) alpha_s)`.
    """
    if not 0 <= t <= 1:
        raise ValueError(f"Retraction parameter must be in [0, 1], got {t}")
    e_s, e_u = dp_directions.dual_vectors()
    am_u, ap_u = pair.alpha_minus(e_u), pair.alpha_plus(e_u)
    if am_u.min() <= 0 or ap_u.min() <= 0:
        raise OrientationMismatch("alpha_-(E_u) and alpha_+(E_u) must be positive")
    am, ap = pair.alpha_minus / am_u, pair.alpha_plus / ap_u

    sigma = _half_log_ratio(-am(e_s), ap(e_s), "-alpha_-(E_s) / alpha_+(E_s)")
    cosh2 = 2 * np.cosh(sigma)
    alpha_u = (am * np.exp(-sigma) + ap * np.exp(sigma)) / cosh2
    alpha_s = (am - ap) / cosh2

    scaled = np.exp((1 - t) * sigma)
    alpha_minus = alpha_u + alpha_s * scaled
    alpha_plus = alpha_u - alpha_s / scaled
    return ContactFormPair(alpha_minus, alpha_plus, ThreeForm(wedge_1_1(alpha_s, alpha_u).bsu))


# ------------ special pairs


def counterexample_pair(A: float, dp: DefiningPair) -> ContactFormPair:
    """`(e^-A alpha_u + e^A alpha_s, e^A alpha_u - e^-A alpha_s)`, a closed balanced AL pair which is not linear AL
    once `sinh(2A) > 1`.

    Against the volume of a volume-preserving `dp` its invariants are `f_+- = 2 r_u` and `g_+- = -2 sinh(2A) r_u`.
    """
    if A < 1:
        logger.warning("counterexample_pair is meant for A >= 1, got A=%s", A)
    if not dp.is_volume_preserving():
        logger.warning("counterexample_pair is meant for volume-preserving defining pairs")
    ea, ema = float(np.exp(A)), float(np.exp(-A))
    return ContactFormPair(dp.alpha_u * ema + dp.alpha_s * ea, dp.alpha_u * ea - dp.alpha_s * ema, dp.dvol)


def skewed_pair(A: float, dp: DefiningPair) -> ContactFormPair:
    """`(alpha_u + e^A alpha_s, alpha_u - e^-A alpha_s)`: the image of the standard pair under the single-function
    retraction family, for constant `sigma = A`."""
    ea = float(np.exp(A))
    return ContactFormPair(dp.alpha_u + dp.alpha_s * ea, dp.alpha_u - dp.alpha_s / ea, dp.dvol)


def closed_pair_from_volume(
    pair: ContactFormPair, tau: TwoForm, invariance_tol: float = 1e-9, proportionality_tol: float = 1e-9
) -> ContactFormPair:
    """Rescale `alpha_+` so that the pair becomes closed.

    `tau` must be `i_X dvol` for an `X`-invariant volume and `alpha_- ^ alpha_+ = kappa tau` for a positive function
    `kappa`; the result is `(alpha_-, alpha_+ / kappa)`.

    Raises
    ------
    NotInvariant
        If `L_X tau` does not vanish.

    NotProportional
        If `alpha_- ^ alpha_+ - kappa tau` has a `theta0` component above `proportionality_tol`, relative to the
        largest coefficient of `alpha_- ^ alpha_+`.

    NonPositiveKappa
        If `kappa` is not positive everywhere.
    """
    drift = lie_X(tau).abs_max()
    if drift > invariance_tol:
        raise NotInvariant(f"tau is not invariant under the flow: max |L_X tau| = {drift:.3g}")
    if np.abs(tau.bsu).min() <= 1e-12:
        raise NearDegenerateVolume("tau vanishes on (e_s, e_u) somewhere")

    wedge = pair.wedge()
    kappa = wedge.bsu / tau.bsu
    residual = (wedge - tau * kappa).abs_max()
    if residual > proportionality_tol * max(wedge.abs_max(), 1.0):
        raise NotProportional(f"alpha_- ^ alpha_+ is not a multiple of tau, max residual {residual:.3g}")
    if kappa.min() <= 0:
        raise NonPositiveKappa(f"alpha_- ^ alpha_+ = kappa tau with min kappa = {kappa.min():.6g}")
    return ContactFormPair(pair.alpha_minus, pair.alpha_plus / kappa, pair.dvol)


def divergence_cobound_residual(h: ScalarField, dp: DefiningPair) -> float:
    """`max |X.h + r_u + r_s|`: how well `-(r_u + r_s)` is approximated by the derivative of `h` along the flow."""
    return (h.derivative(X) + dp.r_u + dp.r_s).abs_max()


def project_to_flow(pair: ContactFormPair) -> ContactFormPair:
    """Drop the `theta0` components so that both forms vanish on `X`."""

    def project(alpha: OneForm) -> OneForm:
        return OneForm(alpha.manifold.zeros(), alpha.a_s, alpha.a_u)

    return ContactFormPair(project(pair.alpha_minus), project(pair.alpha_plus), pair.dvol)


def standard_invariants(dp: DefiningPair) -> PairInvariants:
    """Closed-form invariants of `standard_pair(dp)` against the volume of `dp`."""
    gap, total = dp.r_u - dp.r_s, dp.r_u + dp.r_s
    return PairInvariants(gap, gap, 2 * total, -total, total)


__all__ = [
    "DefiningPair",
    "SigmaPair",
    "verify_defining_pair",
    "model_defining_pair",
    "standard_pair",
    "geiges_defining_pair",
    "gauge_action",
    "conformal_action",
    "conformal_threshold",
    "normalize_volume",
    "balance",
    "extract_sigma",
    "extract_defining_pair",
    "pair_from_sigma",
    "invariants_from_sigma",
    "retraction",
    "retraction_path",
    "bicontact_retraction",
    "counterexample_pair",
    "skewed_pair",
    "closed_pair_from_volume",
    "divergence_cobound_residual",
    "project_to_flow",
]
