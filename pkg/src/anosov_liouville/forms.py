#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Exterior calculus in the coframe
================================

Forms are stored by their coefficients in the coframe `(theta0, theta_s, theta_u)` dual to `(X, e_s, e_u)`:

 - a 1-form is `a0 theta0 + a_s theta_s + a_u theta_u`,
 - a 2-form is `b0s theta0^theta_s + b0u theta0^theta_u + bsu theta_s^theta_u`,
 - a 3-form is `c theta0^theta_s^theta_u`.

The reference volume is the coframe volume (coefficient 1). Any other volume only enters through `volume_ratio`.
"""

from typing import Tuple, Union

import numpy as np

from .errors import GridMismatch, NearDegenerateVolume, NotInvariant
from .frames import PAIRS, FrameManifold, ScalarField, S, U, X
from .spectral import spectral_shift

Scalar = Union[ScalarField, float]


def _same_manifold(*fields: ScalarField) -> FrameManifold:
    manifold = fields[0].manifold
    for f in fields[1:]:
        if f.manifold is not manifold:
            raise GridMismatch(f"Coefficients live on different models: {manifold.name} and {f.manifold.name}")
    return manifold


def _as_field(value, manifold: FrameManifold) -> ScalarField:
    if isinstance(value, ScalarField):
        return value
    if callable(value):
        return manifold.field(value)
    return ScalarField(value, manifold)


class _Coefficients:
    """Common behaviour of forms and vector fields: a fixed tuple of coefficient fields on one model."""

    __slots__ = ()

    # let our own operators run when numpy arrays or fields are on the other side
    __array_ufunc__ = None

    @property
    def components(self) -> Tuple[ScalarField, ...]:
        return tuple(getattr(self, name) for name in self.__slots__)

    @property
    def manifold(self) -> FrameManifold:
        return self.components[0].manifold

    @classmethod
    def from_values(cls, manifold: FrameManifold, *values):
        """Build from constants, arrays, fields or functions of the grid coordinates."""
        return cls(*(_as_field(v, manifold) for v in values))

    def on(self, manifold: FrameManifold):
        """The same coefficients on another model sharing this grid (for instance a rescaled flow)."""
        if manifold.grid != self.manifold.grid:
            raise GridMismatch(f"Grids of {self.manifold.name} and {manifold.name} differ")
        return type(self)(*(ScalarField(a.values, manifold) for a in self.components))

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join(f"{k}={getattr(self, k)!r}" for k in self.__slots__))

    def _combine(self, other, op):
        if isinstance(other, type(self)):
            return type(self)(*(op(a, b) for a, b in zip(self.components, other.components)))
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return type(self)(*(-a for a in self.components))

    def __mul__(self, other):
        if isinstance(other, (ScalarField, int, float, np.floating, np.integer)):
            return type(self)(*(a * other for a in self.components))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (ScalarField, int, float, np.floating, np.integer)):
            return type(self)(*(a / other for a in self.components))
        return NotImplemented

    def sup_distance(self, other) -> float:
        """Largest absolute coefficient difference with `other` over the grid."""
        return max(a.sup_distance(b) for a, b in zip(self.components, other.components))

    def abs_max(self) -> float:
        return max(a.abs_max() for a in self.components)


class VectorField(_Coefficients):
    """`v0 X + v_s e_s + v_u e_u`."""

    __slots__ = ("v0", "v_s", "v_u")

    def __init__(self, v0: ScalarField, v_s: ScalarField, v_u: ScalarField):
        _same_manifold(v0, v_s, v_u)
        self.v0, self.v_s, self.v_u = v0, v_s, v_u


class OneForm(_Coefficients):
    """`a0 theta0 + a_s theta_s + a_u theta_u`. Its value on the flow direction is `a0`."""

    __slots__ = ("a0", "a_s", "a_u")

    def __init__(self, a0: ScalarField, a_s: ScalarField, a_u: ScalarField):
        _same_manifold(a0, a_s, a_u)
        self.a0, self.a_s, self.a_u = a0, a_s, a_u

    def __call__(self, v: VectorField) -> ScalarField:
        return self.a0 * v.v0 + self.a_s * v.v_s + self.a_u * v.v_u


class TwoForm(_Coefficients):
    """`b0s theta0^theta_s + b0u theta0^theta_u + bsu theta_s^theta_u`."""

    __slots__ = ("b0s", "b0u", "bsu")

    def __init__(self, b0s: ScalarField, b0u: ScalarField, bsu: ScalarField):
        _same_manifold(b0s, b0u, bsu)
        self.b0s, self.b0u, self.bsu = b0s, b0u, bsu

    def component(self, i: int, j: int) -> ScalarField:
        """The value on the frame pair `(e_i, e_j)`."""
        if i == j:
            return self.manifold.zeros()
        if (i, j) in PAIRS:
            return self.components[PAIRS.index((i, j))]
        return -self.components[PAIRS.index((j, i))]

    def __call__(self, v: VectorField, w: VectorField) -> ScalarField:
        vc, wc = v.components, w.components
        return sum((self.component(i, j) * (vc[i] * wc[j] - vc[j] * wc[i]) for i, j in PAIRS), self.manifold.zeros())


class ThreeForm(_Coefficients):
    """`c theta0^theta_s^theta_u`."""

    __slots__ = ("c",)

    def __init__(self, c: ScalarField):
        self.c = c


def coframe(manifold: FrameManifold) -> Tuple[OneForm, OneForm, OneForm]:
    """The coframe `(theta0, theta_s, theta_u)` of a model."""
    zero, one = manifold.zeros(), manifold.ones()
    return OneForm(one, zero, zero), OneForm(zero, one, zero), OneForm(zero, zero, one)


def frame(manifold: FrameManifold) -> Tuple[VectorField, VectorField, VectorField]:
    """The frame `(X, e_s, e_u)` of a model, as vector fields."""
    zero, one = manifold.zeros(), manifold.ones()
    return VectorField(one, zero, zero), VectorField(zero, one, zero), VectorField(zero, zero, one)


def volume_form(manifold: FrameManifold) -> ThreeForm:
    """The coframe volume `theta0^theta_s^theta_u`."""
    return ThreeForm(manifold.ones())


def differential(f: ScalarField) -> OneForm:
    """`df = (X.f) theta0 + (e_s.f) theta_s + (e_u.f) theta_u`."""
    return OneForm(f.derivative(X), f.derivative(S), f.derivative(U))


def _bracket_term(manifold: FrameManifold, coefs, i: int, j: int) -> ScalarField:
    """`sum_k c^k_ij coefs[k]`."""
    total = manifold.zeros()
    for k in range(3):
        c = manifold.structure_function(k, i, j)
        if not (c.is_constant() and c.values.flat[0] == 0):
            total = total + c * coefs[k]
    return total


def exterior_d(omega: OneForm) -> TwoForm:
    """`d omega(e_i, e_j) = e_i.a_j - e_j.a_i - sum_k c^k_ij a_k`."""
    m = omega.manifold
    a = omega.components

    def b(i, j):
        return a[j].derivative(i) - a[i].derivative(j) - _bracket_term(m, a, i, j)

    return TwoForm(*(b(i, j) for i, j in PAIRS))


def exterior_d_2(beta: TwoForm) -> ThreeForm:
    """Exterior derivative of a 2-form, from its values on frame pairs.

    `dB(e0, e1, e2) = e0.B12 - e1.B02 + e2.B01 - B([e0, e1], e2) + B([e0, e2], e1) - B([e1, e2], e0)`
    """
    m = beta.manifold

    def b_of_bracket(i, j, k):
        # B([e_i, e_j], e_k)
        return _bracket_term(m, [beta.component(l_, k) for l_ in range(3)], i, j)

    c = (
        beta.component(S, U).derivative(X)
        - beta.component(X, U).derivative(S)
        + beta.component(X, S).derivative(U)
        - b_of_bracket(X, S, U)
        + b_of_bracket(X, U, S)
        - b_of_bracket(S, U, X)
    )
    return ThreeForm(c)


def wedge_1_1(alpha: OneForm, beta: OneForm) -> TwoForm:
    a, b = alpha.components, beta.components
    return TwoForm(*(a[i] * b[j] - a[j] * b[i] for i, j in PAIRS))


def wedge_1_2(alpha: OneForm, beta: TwoForm) -> ThreeForm:
    """`c = a0 bsu - a_s b0u + a_u b0s`."""
    return ThreeForm(alpha.a0 * beta.bsu - alpha.a_s * beta.b0u + alpha.a_u * beta.b0s)


def interior_X(form: Union[OneForm, TwoForm, ThreeForm]):
    """Contraction with the flow direction `X`."""
    if isinstance(form, OneForm):
        return form.a0
    zero = form.manifold.zeros()
    if isinstance(form, TwoForm):
        return OneForm(zero, form.b0s, form.b0u)
    elif isinstance(form, ThreeForm):
        return TwoForm(zero, zero, form.c)
    else:
        raise TypeError(f"Can not contract {form!r}")


def lie_X(form: Union[OneForm, TwoForm]):
    """Lie derivative along `X` through Cartan's formula `L_X = i_X d + d i_X`."""
    if isinstance(form, OneForm):
        return interior_X(exterior_d(form)) + differential(form.a0)
    elif isinstance(form, TwoForm):
        return interior_X(exterior_d_2(form)) + exterior_d(interior_X(form))
    else:
        raise TypeError(f"Lie derivative of {form!r} is not supported")


def volume_ratio(omega: ThreeForm, dvol: ThreeForm, threshold: float = 1e-12) -> ScalarField:
    """The function `omega / dvol`.

    Raises
    ------
    NearDegenerateVolume
        If `|dvol|` falls to `threshold` or below somewhere on the grid.
    """
    worst = float(np.min(np.abs(dvol.c.values)))
    if worst <= threshold:
        index = np.abs(dvol.c).argmin()
        raise NearDegenerateVolume(
            f"Volume form coefficient {worst:.3g} is below the threshold {threshold:.3g} "
            f"at {dvol.manifold.grid.point(index)}"
        )
    return omega.c / dvol.c


def flow_pullback(omega: OneForm, h: float) -> OneForm:
    """The pullback `(phi^h)* omega` by the time-`h` map of the flow.

    Only available for models where `X` moves the grid coordinates at constant speed and `ad_X` is diagonal with
    constant eigenvalues, so that `(phi^h)* theta_j = exp(-h c^j_0j) theta_j`.
    """
    m = omega.manifold
    diagonal = [m.structure[X, j, k] for j in range(3) for k in range(3) if j != k]
    speeds = [(axis, coef) for axis, coef in m.derivations[X]]
    if not (
        m.is_constant_structure()
        and all(np.all(c == 0) for c in diagonal)
        and all(np.all(coef == coef.flat[0]) for _, coef in speeds)
    ):
        raise NotInvariant(f"The flow of {m.name} has no explicit pullback on coframe coefficients")

    coefs = []
    for j, a in enumerate(omega.components):
        values = a.values
        for axis, coef in speeds:
            values = spectral_shift(values, axis, m.grid.periods[axis], h * float(coef.flat[0]))
        rate = float(m.structure[(X, j, j) + (0,) * m.grid.ndim])
        coefs.append(ScalarField(values * np.exp(-h * rate), m))
    return OneForm(*coefs)
