#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Pair invariants and classification
===================================

Given a pair of contact forms `(alpha_minus, alpha_plus)` and a volume form `dvol`, the five functions

    alpha_+ ^ d alpha_+ = f_+ dvol        alpha_- ^ d alpha_- = -f_- dvol
    alpha_- ^ d alpha_+ = g_+ dvol        alpha_+ ^ d alpha_- = g_- dvol
    d(alpha_- ^ alpha_+) = f_0 dvol       (f_0 = g_- - g_+)

decide every open condition the package checks: contact signs, the (Anosov) Liouville conditions on `R x M`, their
linear variants on `[-1, 1] x M`, and the Reeb field pairings.
"""

from typing import Dict, Optional, Tuple

import numpy as np

from . import compat
from .errors import DegenerateKernel, GridMismatch, InvalidInvariants, NonContact
from .forms import (
    OneForm,
    ThreeForm,
    TwoForm,
    VectorField,
    exterior_d,
    exterior_d_2,
    volume_form,
    volume_ratio,
    wedge_1_1,
    wedge_1_2,
)
from .frames import FrameManifold, ScalarField, S, U, X
from .utils import gen_repr

logger = compat.getLogger("criteria")

TAU_POS = 1e-9
"""Default positivity tolerance of strict inequalities."""

EQ_TOL = 1e-9
"""Default tolerance of equalities (balanced, closed, Geiges)."""

VOLUME_THRESHOLD = 1e-12

REEB_RESIDUAL = 1e-9

FLAGS = ("contact_minus", "contact_plus", "liouville", "AL", "lin_liouville", "lin_AL", "balanced", "closed", "geiges")
STRICT_FLAGS = ("contact_minus", "contact_plus", "liouville", "AL", "lin_liouville", "lin_AL")


class ContactFormPair:
    """A pair of 1-forms `(alpha_minus, alpha_plus)` together with the volume form invariants are measured against.

    Parameters
    ----------
    alpha_minus : OneForm
        The candidate negative contact form.

    alpha_plus : OneForm
        The candidate positive contact form.

    dvol : ThreeForm, optional
        The declared volume. Defaults to the coframe volume of the model.
    """

    __slots__ = ("alpha_minus", "alpha_plus", "dvol")

    __repr__ = gen_repr()

    def __init__(self, alpha_minus: OneForm, alpha_plus: OneForm, dvol: Optional[ThreeForm] = None):
        if alpha_minus.manifold is not alpha_plus.manifold:
            raise GridMismatch("The two forms of a pair must live on the same model")
        if dvol is None:
            dvol = volume_form(alpha_minus.manifold)
        elif dvol.manifold is not alpha_minus.manifold:
            raise GridMismatch("The volume form of a pair must live on the model of its forms")

        self.alpha_minus = alpha_minus
        self.alpha_plus = alpha_plus
        self.dvol = dvol

    @property
    def manifold(self) -> FrameManifold:
        return self.alpha_minus.manifold

    def flipped(self) -> "ContactFormPair":
        """The pair `(-alpha_minus, alpha_plus)`."""
        return ContactFormPair(-self.alpha_minus, self.alpha_plus, self.dvol)

    def with_dvol(self, dvol: ThreeForm) -> "ContactFormPair":
        return ContactFormPair(self.alpha_minus, self.alpha_plus, dvol)

    def wedge(self) -> TwoForm:
        """`alpha_minus ^ alpha_plus`."""
        return wedge_1_1(self.alpha_minus, self.alpha_plus)

    def sup_distance(self, other: "ContactFormPair") -> float:
        """Largest coefficient difference between the forms of two pairs (volumes are not compared)."""
        return max(self.alpha_minus.sup_distance(other.alpha_minus), self.alpha_plus.sup_distance(other.alpha_plus))


class PairInvariants:
    """The five invariant functions of a pair relative to its declared volume."""

    __slots__ = ("f_plus", "f_minus", "f_zero", "g_plus", "g_minus")

    __repr__ = gen_repr()

    def __init__(
        self,
        f_plus: ScalarField,
        f_minus: ScalarField,
        f_zero: ScalarField,
        g_plus: ScalarField,
        g_minus: ScalarField,
    ):
        self.f_plus = f_plus
        self.f_minus = f_minus
        self.f_zero = f_zero
        self.g_plus = g_plus
        self.g_minus = g_minus

    @property
    def manifold(self) -> FrameManifold:
        return self.f_plus.manifold

    def flipped(self) -> "PairInvariants":
        """Invariants of `(-alpha_minus, alpha_plus)`: `f_+-` are unchanged, `g_+-` and `f_0` change sign."""
        return PairInvariants(self.f_plus, self.f_minus, -self.f_zero, -self.g_plus, -self.g_minus)

    def scaled(self, factor: ScalarField) -> "PairInvariants":
        return PairInvariants(*(getattr(self, k) * factor for k in self.__slots__))

    def items(self):
        return ((k, getattr(self, k)) for k in self.__slots__)


def pair_invariants(pair: ContactFormPair, threshold: float = VOLUME_THRESHOLD) -> PairInvariants:
    """Compute `(f_+, f_-, f_0, g_+, g_-)` of `pair` against its declared volume.

    `f_0` is assembled as `g_- - g_+`; `closedness_field` computes it directly from `d(alpha_- ^ alpha_+)`.

    Raises
    ------
    NearDegenerateVolume
        If the declared volume is (nearly) degenerate somewhere.
    """
    am, ap, dvol = pair.alpha_minus, pair.alpha_plus, pair.dvol
    d_am, d_ap = exterior_d(am), exterior_d(ap)

    f_plus = volume_ratio(wedge_1_2(ap, d_ap), dvol, threshold)
    f_minus = -volume_ratio(wedge_1_2(am, d_am), dvol, threshold)
    g_plus = volume_ratio(wedge_1_2(am, d_ap), dvol, threshold)
    g_minus = volume_ratio(wedge_1_2(ap, d_am), dvol, threshold)
    return PairInvariants(f_plus, f_minus, g_minus - g_plus, g_plus, g_minus)


def closedness_field(pair: ContactFormPair, threshold: float = VOLUME_THRESHOLD) -> ScalarField:
    """`d(alpha_- ^ alpha_+) / dvol`, computed with the exterior derivative of 2-forms."""
    return volume_ratio(exterior_d_2(pair.wedge()), pair.dvol, threshold)


# ------------ margins


class Margin:
    """The minimum slack of one condition over the grid, with where it is attained.

    Strict conditions hold when the slack exceeds `tol` and are "undecided" when `|value| <= tol`. Non-strict ones
    (deviations from an equality, reported as non-positive numbers) hold when the slack is at least `-tol`.
    """

    __slots__ = ("name", "value", "location", "strict", "tol")

    __repr__ = gen_repr()

    def __init__(self, name: str, value: float, location: Dict[str, float], strict: bool, tol: float):
        self.name = name
        self.value = float(value)
        self.location = location
        self.strict = strict
        self.tol = tol

    @classmethod
    def minimum(cls, name: str, field: ScalarField, strict: bool, tol: float) -> "Margin":
        """The margin `min(field)`, located at its argmin."""
        return cls(name, field.min(), field.manifold.grid.point(field.argmin()), strict, tol)

    @classmethod
    def deviation(cls, name: str, field: ScalarField, tol: float) -> "Margin":
        """The non-strict margin `-max|field|`, located where `|field|` is largest."""
        worst = -np.abs(field)
        return cls(name, worst.min(), field.manifold.grid.point(worst.argmin()), False, tol)

    @property
    def verdict(self) -> str:
        if self.strict:
            if abs(self.value) <= self.tol:
                return "undecided"
            return "pass" if self.value > self.tol else "fail"
        return "pass" if self.value >= -self.tol else "fail"

    @property
    def flag(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> Dict:
        return {
            "value": self.value,
            "verdict": self.verdict,
            "flag": self.flag,
            "strict": self.strict,
            "location": self.location,
        }


class MarginReport:
    """The margins of all classification conditions of one pair, in a fixed order."""

    __slots__ = ("margins",)

    __repr__ = gen_repr()

    def __init__(self, margins: Dict[str, Margin]):
        self.margins = margins

    def __getitem__(self, name: str) -> Margin:
        return self.margins[name]

    def __contains__(self, name: str) -> bool:
        return name in self.margins

    @property
    def flags(self) -> Dict[str, bool]:
        return {name: m.flag for name, m in self.margins.items()}

    def add(self, margin: Margin):
        self.margins[margin.name] = margin

    def all_pass(self) -> bool:
        return all(m.flag for m in self.margins.values())

    def to_dict(self) -> Dict:
        return {name: m.to_dict() for name, m in self.margins.items()}


def _sentinel(name: str, strict: bool, tol: float) -> Margin:
    return Margin(name, -np.inf, {}, strict, tol)


def classify_pair(
    inv: PairInvariants, tol: float = TAU_POS, eq_tol: float = EQ_TOL, strict: bool = False
) -> MarginReport:
    """Compute the margins and flags of every classification condition.

    Parameters
    ----------
    inv : PairInvariants
        Invariants of the pair, all against the same volume.

    tol : float
        Positivity tolerance of the strict conditions.

    eq_tol : float
        Tolerance of the equalities (balanced, closed, Geiges).

    strict : bool
        If `True`, a non-positive `f_+` or `f_-` raises `InvalidInvariants` instead of reporting the Liouville and
        AL margins as `-inf`.
    """
    report = MarginReport({})
    report.add(Margin.minimum("contact_minus", inv.f_minus, True, tol))
    report.add(Margin.minimum("contact_plus", inv.f_plus, True, tol))

    positive = inv.f_minus.min() > 0 and inv.f_plus.min() > 0
    if positive:
        root = 2 * np.sqrt(inv.f_minus * inv.f_plus)
        report.add(Margin.minimum("liouville", inv.f_zero + root, True, tol))
        report.add(Margin.minimum("AL", root - np.abs(inv.f_zero), True, tol))
    elif strict:
        raise InvalidInvariants(
            f"f_- and f_+ must be positive for the Liouville criteria, got min f_- = {inv.f_minus.min():.6g} "
            f"and min f_+ = {inv.f_plus.min():.6g}"
        )
    else:
        logger.warning("f_- or f_+ is not positive: Liouville and AL margins are reported as -inf")
        report.add(_sentinel("liouville", True, tol))
        report.add(_sentinel("AL", True, tol))

    # endpoints t = +1 and t = -1 of the linear density (both are affine in t)
    lin = np.minimum(inv.f_plus - inv.g_plus, inv.f_minus + inv.g_minus)
    report.add(Margin.minimum("lin_liouville", lin, True, tol))
    lin_al = np.minimum(inv.f_plus - np.abs(inv.g_plus), inv.f_minus - np.abs(inv.g_minus))
    report.add(Margin.minimum("lin_AL", lin_al, True, tol))

    report.add(Margin.deviation("balanced", inv.f_plus - inv.f_minus, eq_tol))
    report.add(Margin.deviation("closed", inv.f_zero, eq_tol))
    if positive:
        worst = np.maximum(np.abs(inv.f_plus - inv.f_minus), np.maximum(np.abs(inv.g_plus), np.abs(inv.g_minus)))
        report.add(Margin.deviation("geiges", worst, eq_tol))
    else:
        report.add(_sentinel("geiges", False, eq_tol))

    for name in FLAGS:
        m = report[name]
        logger.debug("%s margin %.12g at %s (%s)", name, m.value, m.location, m.verdict)
    return report


def supports_flow(pair: ContactFormPair, tol: float = TAU_POS, annihilation_tol: float = EQ_TOL) -> Margin:
    """Whether the pair can be a bi-contact structure supporting `X`.

    Both forms must vanish on `X` and `(alpha_- ^ alpha_+)(e_s, e_u)` must have the sign of the declared volume. The
    margin is the minimum of that quantity divided by the volume coefficient, or `-inf` when a form does not
    annihilate `X`.
    """
    leak = max(pair.alpha_minus.a0.abs_max(), pair.alpha_plus.a0.abs_max())
    if leak > annihilation_tol:
        logger.debug("forms do not annihilate X (max |alpha(X)| = %.3g)", leak)
        return _sentinel("supports_flow", True, tol)
    return Margin.minimum("supports_flow", pair.wedge().bsu / pair.dvol.c, True, tol)


def wedge_normalisation(pair: ContactFormPair) -> ScalarField:
    """The function `k` with `alpha_- ^ alpha_+ = k i_X dvol` on the plane `(e_s, e_u)`."""
    return volume_ratio(ThreeForm(pair.wedge().bsu), pair.dvol)


def divergence_bounds(pair: ContactFormPair, inv: Optional[PairInvariants] = None) -> Tuple[ScalarField, ScalarField]:
    """Return `(f_0 / k, 2 sqrt(f_- f_+) / |k|)`, both independent of the declared volume.

    For pairs obtained from a defining pair these are `r_u + r_s` and the bound on the expansion gap that the AL
    condition compares it with: the pair is AL exactly where the first is smaller in absolute value.
    """
    if inv is None:
        inv = pair_invariants(pair)
    if inv.f_minus.min() <= 0 or inv.f_plus.min() <= 0:
        raise InvalidInvariants("divergence bounds require positive f_- and f_+")
    k = wedge_normalisation(pair)
    return inv.f_zero / k, 2 * np.sqrt(inv.f_minus * inv.f_plus) / np.abs(k)


# ------------ Reeb fields


def reeb_field(alpha: OneForm, sign: int = 1, threshold: float = VOLUME_THRESHOLD) -> VectorField:
    """The Reeb field `R` of `alpha`: `alpha(R) = 1` and `d alpha(R, .) = 0`.

    The kernel of the antisymmetric matrix `[d alpha(e_i, e_j)]` is spanned by `(b_su, -b_0u, b_0s)`; `R` is that
    vector divided by its pairing with `alpha`.

    Parameters
    ----------
    alpha : OneForm
        A contact form.

    sign : int
        `+1` for a positive contact form, `-1` for a negative one.

    Raises
    ------
    DegenerateKernel
        If `d alpha` vanishes somewhere (the kernel is 3-dimensional there).

    NonContact
        If `alpha ^ d alpha` does not have the declared sign everywhere.
    """
    b = exterior_d(alpha)
    k0, ks, ku = b.bsu, -b.b0u, b.b0s
    size = np.sqrt(k0 * k0 + ks * ks + ku * ku)
    if size.min() <= threshold:
        raise DegenerateKernel(f"d alpha vanishes at {alpha.manifold.grid.point(size.argmin())}")

    pairing = alpha.a0 * k0 + alpha.a_s * ks + alpha.a_u * ku
    if (sign * pairing).min() <= threshold:
        kind = "positive" if sign > 0 else "negative"
        raise NonContact(
            f"Form is not a {kind} contact form at {alpha.manifold.grid.point((sign * pairing).argmin())}"
        )
    return VectorField(k0 / pairing, ks / pairing, ku / pairing)


def reeb_residual(alpha: OneForm, reeb: VectorField) -> float:
    """`max(|alpha(R) - 1|, |d alpha(R, e_i)|)` over the grid and the frame."""
    b = exterior_d(alpha)
    worst = (alpha(reeb) - 1).abs_max()
    for i in (X, S, U):
        row = sum((b.component(j, i) * reeb.components[j] for j in (X, S, U)), alpha.manifold.zeros())
        worst = max(worst, row.abs_max())
    return worst


class ReebData:
    """Reeb fields of a pair and their pairings with the pair and, optionally, with a defining pair."""

    __slots__ = ("R_minus", "R_plus", "pairings", "residual")

    __repr__ = gen_repr(hide=("R_minus", "R_plus"))

    def __init__(self, R_minus: VectorField, R_plus: VectorField, pairings: Dict[str, ScalarField], residual: float):
        self.R_minus = R_minus
        self.R_plus = R_plus
        self.pairings = pairings
        self.residual = residual


def reeb_data(pair: ContactFormPair, dp=None, residual_tol: float = REEB_RESIDUAL) -> ReebData:
    """Solve for both Reeb fields and collect their pairings.

    If a defining pair `dp` is given, the pairings `alpha_s(R_+-)` and `alpha_u(R_+-)` are included.
    """
    r_minus = reeb_field(pair.alpha_minus, -1)
    r_plus = reeb_field(pair.alpha_plus, +1)
    residual = max(reeb_residual(pair.alpha_minus, r_minus), reeb_residual(pair.alpha_plus, r_plus))
    if residual > residual_tol:
        raise DegenerateKernel(f"Reeb fields solve their equations only up to {residual:.3g}")

    pairings = {
        "alpha_minus(R_plus)": pair.alpha_minus(r_plus),
        "alpha_plus(R_minus)": pair.alpha_plus(r_minus),
    }
    if dp is not None:
        pairings["alpha_s(R_minus)"] = dp.alpha_s(r_minus)
        pairings["alpha_u(R_minus)"] = dp.alpha_u(r_minus)
        pairings["alpha_s(R_plus)"] = dp.alpha_s(r_plus)
        pairings["alpha_u(R_plus)"] = dp.alpha_u(r_plus)
    return ReebData(r_minus, r_plus, pairings, residual)


def reeb_criteria(
    pair: ContactFormPair, tol: float = TAU_POS, data: Optional[ReebData] = None
) -> Tuple[Dict[str, ScalarField], MarginReport]:
    """The Reeb pairing criteria.

    Returns the fields `alpha_-(R_+) + alpha_+(R_-)`, `alpha_-(R_+)` and `alpha_+(R_-)`, and the margins

     - `reeb_sum`: `2 - max|alpha_-(R_+) + alpha_+(R_-)|`, equivalent to AL for balanced pairs,
     - `reeb_lin`: `1 - max(|alpha_-(R_+)|, |alpha_+(R_-)|)`, equivalent to linear AL.
    """
    if data is None:
        data = reeb_data(pair)
    minus_on_plus = data.pairings["alpha_minus(R_plus)"]
    plus_on_minus = data.pairings["alpha_plus(R_minus)"]
    total = minus_on_plus + plus_on_minus
    fields = {"sum": total, "alpha_minus(R_plus)": minus_on_plus, "alpha_plus(R_minus)": plus_on_minus}

    report = MarginReport({})
    report.add(Margin.minimum("reeb_sum", 2 - np.abs(total), True, tol))
    report.add(Margin.minimum("reeb_lin", 1 - np.maximum(np.abs(minus_on_plus), np.abs(plus_on_minus)), True, tol))
    return fields, report


def frame_determinant(pair: ContactFormPair, data: Optional[ReebData] = None) -> ScalarField:
    """Determinant of the frame components of `(X, R_-, R_+)`."""
    if data is None:
        data = reeb_data(pair)
    rm, rp = data.R_minus, data.R_plus
    return rm.v_s * rp.v_u - rm.v_u * rp.v_s


def frame_determinant_margin(det: ScalarField, tol: float = TAU_POS) -> Margin:
    return Margin.minimum("frame_determinant", np.abs(det), True, tol)


def check_contact(pair: ContactFormPair, inv: Optional[PairInvariants] = None, tol: float = TAU_POS):
    """Raise `NonContact` unless both forms are contact forms of their declared sign."""
    if inv is None:
        inv = pair_invariants(pair)
    for name, f in (("alpha_minus", inv.f_minus), ("alpha_plus", inv.f_plus)):
        if f.min() <= tol:
            raise NonContact(f"{name} is not a contact form of the expected sign (min {f.min():.6g})")
    return inv


__all__ = [
    "ContactFormPair",
    "PairInvariants",
    "Margin",
    "MarginReport",
    "ReebData",
    "pair_invariants",
    "closedness_field",
    "classify_pair",
    "supports_flow",
    "divergence_bounds",
    "reeb_field",
    "reeb_data",
    "reeb_criteria",
    "frame_determinant",
]
