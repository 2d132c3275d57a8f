#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Framed models and scalar fields
===============================

A model is a closed 3-manifold carrying a global frame `(X, e_s, e_u)`, where `X` generates the flow. Everything the
rest of the package computes reduces to the bracket table of that frame,

    [e_i, e_j] = sum_k c^k_ij e_k,

and to the frame derivatives of scalar fields, which are sampled on a periodic grid of up to three coordinates.
"""

from numbers import Number
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.mixins import NDArrayOperatorsMixin

from .errors import GridMismatch, ModelError, NonFiniteField
from .spectral import SCHEMES, grid_derivative
from .utils import gen_repr

FRAME_LABELS = ("X", "e_s", "e_u")

# frame indices
X, S, U = 0, 1, 2

# (i, j) pairs of the 2-form coefficients, in storage order
PAIRS = ((X, S), (X, U), (S, U))

CATMAP_KAPPA = float(np.log((3 + np.sqrt(5)) / 2))
"""Logarithm of the expanding eigenvalue of the cat map [[2, 1], [1, 1]]."""

MIN_SAMPLES = 4


class GridSpec:
    """Periodic parameter grid: which coordinates fields depend on, with how many samples and which period.

    A grid without axes describes models whose fields are all constant.
    """

    __slots__ = ("axes", "shape", "periods", "origin")

    __repr__ = gen_repr()

    def __init__(
        self,
        axes: Sequence[str] = (),
        shape: Sequence[int] = (),
        periods: Optional[Sequence[float]] = None,
        origin: Optional[Sequence[float]] = None,
    ):
        axes = tuple(axes)
        shape = tuple(int(n) for n in shape)
        periods = tuple(float(p) for p in periods) if periods is not None else (1.0,) * len(axes)
        origin = tuple(float(o) for o in origin) if origin is not None else (0.0,) * len(axes)

        if not (len(axes) == len(shape) == len(periods) == len(origin)) or len(axes) > 3:
            raise ModelError(f"Inconsistent grid description: axes={axes}, shape={shape}, periods={periods}")
        for name, n, period in zip(axes, shape, periods):
            if n < MIN_SAMPLES:
                raise ModelError(f"Degenerate grid: axis {name!r} has {n} samples, at least {MIN_SAMPLES} required")
            if not period > 0:
                raise ModelError(f"Degenerate grid: axis {name!r} has non-positive period {period}")

        self.axes = axes
        self.shape = shape
        self.periods = periods
        self.origin = origin

    def __eq__(self, other):
        return isinstance(other, GridSpec) and all(
            getattr(self, att) == getattr(other, att) for att in GridSpec.__slots__
        )

    def __hash__(self):
        return hash(tuple(getattr(self, att) for att in GridSpec.__slots__))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=int))

    def spacing(self, axis: int) -> float:
        return self.periods[axis] / self.shape[axis]

    def coordinates(self, axis: int) -> np.ndarray:
        """The sample coordinates of `axis`, reduced modulo its period."""
        n = self.shape[axis]
        return np.mod(self.origin[axis] + self.periods[axis] * np.arange(n) / n, self.periods[axis])

    def mesh(self) -> Dict[str, np.ndarray]:
        """Broadcastable coordinate arrays, keyed by axis name."""
        coords = np.meshgrid(*(self.coordinates(a) for a in range(self.ndim)), indexing="ij", sparse=True)
        return dict(zip(self.axes, coords))

    def point(self, index: Tuple[int, ...]) -> Dict[str, float]:
        """Coordinates of the grid point at `index`."""
        return {name: float(self.coordinates(a)[i]) for a, (name, i) in enumerate(zip(self.axes, index))}


class ScalarField(NDArrayOperatorsMixin):
    """Immutable grid samples of a smooth function on a model.

    Arithmetic operators and numpy ufuncs apply pointwise and return new fields. Fields of different models can not
    be combined.
    """

    __slots__ = ("values", "manifold")

    def __init__(self, values, manifold: "FrameManifold"):
        shape = manifold.grid.shape
        values = np.asarray(values, dtype=float)
        if values.shape != shape:
            try:
                values = np.broadcast_to(values, shape)
            except ValueError:
                raise GridMismatch(f"Values of shape {values.shape} do not match the grid {shape} of {manifold.name}")
        values = np.array(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise NonFiniteField(f"Non-finite values in a scalar field on {manifold.name}")
        values.flags.writeable = False

        self.values = values
        self.manifold = manifold

    def __repr__(self):
        if self.is_constant():
            return f"ScalarField({self.min():.12g} on {self.manifold.name})"
        return f"ScalarField([{self.min():.6g}, {self.max():.6g}] on {self.manifold.name})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or "out" in kwargs:
            return NotImplemented

        manifold = None
        arrays = []
        for x in inputs:
            if isinstance(x, ScalarField):
                if manifold is None:
                    manifold = x.manifold
                elif x.manifold is not manifold:
                    raise GridMismatch(f"Can not combine fields of {manifold.name} and {x.manifold.name}")
                arrays.append(x.values)
            elif isinstance(x, (Number, np.ndarray, np.generic)):
                arrays.append(x)
            else:
                return NotImplemented

        result = ufunc(*arrays, **kwargs)
        if isinstance(result, tuple):
            return tuple(self._wrap(r, manifold) for r in result)
        return self._wrap(result, manifold)

    @staticmethod
    def _wrap(result, manifold):
        result = np.asarray(result)
        if result.dtype.kind == "f":
            return ScalarField(result, manifold)
        return result

    def is_constant(self) -> bool:
        v = self.values
        return v.size == 0 or bool(np.all(v == v.flat[0]))

    def min(self) -> float:
        return float(np.min(self.values))

    def max(self) -> float:
        return float(np.max(self.values))

    def abs_max(self) -> float:
        return float(np.max(np.abs(self.values)))

    def argmin(self) -> Tuple[int, ...]:
        if self.values.ndim == 0:
            return ()
        return tuple(int(i) for i in np.unravel_index(np.argmin(self.values), self.values.shape))

    def sup_distance(self, other: Union["ScalarField", float]) -> float:
        other = other.values if isinstance(other, ScalarField) else other
        return float(np.max(np.abs(self.values - other)))

    def derivative(self, i: int) -> "ScalarField":
        """Frame derivative `e_i . f`."""
        return self.manifold.frame_derivative(self, i)


# A derivation maps a field to sum_a coefficient_a * d/dx_a
Derivation = Tuple[Tuple[int, np.ndarray], ...]


class FrameManifold:
    """A model: bracket table of a global frame `(X, e_s, e_u)` and the grid its fields are sampled on.

    Parameters
    ----------
    name : str
        Identifier, used in messages and reports.

    grid : GridSpec
        The parameter grid of the scalar fields.

    structure : array-like
        Structure functions `c[i, j, k] = c^k_ij`, of shape `(3, 3, 3)` (constants) or `(3, 3, 3) + grid.shape`.
        Must be antisymmetric in `(i, j)`.

    derivations : Sequence
        For each frame vector, a sequence of `(axis, coefficient)` pairs: `e_i . f = sum coefficient * d_axis f`.

    scheme : str
        How grid derivatives are computed, 'spectral' (default) or 'fd'.
    """

    __slots__ = ("name", "grid", "structure", "derivations", "scheme", "__weakref__")

    def __init__(self, name: str, grid: GridSpec, structure, derivations: Sequence, scheme: str = "spectral"):
        if scheme not in SCHEMES:
            raise ModelError(f"Unknown derivative scheme {scheme!r}. Available schemes: {SCHEMES}")

        structure = np.asarray(structure, dtype=float)
        if structure.shape == (3, 3, 3):
            structure = structure.reshape((3, 3, 3) + (1,) * len(grid.shape))
        try:
            structure = np.broadcast_to(structure, (3, 3, 3) + grid.shape)
        except ValueError:
            raise ModelError(f"Structure functions of shape {structure.shape} do not match the grid {grid.shape}")
        if not np.array_equal(structure, -np.swapaxes(structure, 0, 1)):
            raise ModelError(f"Structure functions of {name} are not antisymmetric")

        if len(derivations) != 3:
            raise ModelError("One derivation rule per frame vector is required")
        rules = []
        for rule in derivations:
            terms = []
            for axis, coef in rule:
                if not 0 <= axis < grid.ndim:
                    raise ModelError(f"Derivation refers to axis {axis} but the grid has {grid.ndim} axes")
                coef = np.array(np.broadcast_to(np.asarray(coef, dtype=float), grid.shape))
                coef.flags.writeable = False
                terms.append((axis, coef))
            rules.append(tuple(terms))

        self.name = name
        self.grid = grid
        self.structure = structure
        self.derivations: Tuple[Derivation, ...] = tuple(rules)
        self.scheme = scheme

    def __repr__(self):
        return f"FrameManifold({self.name!r}, grid={self.grid.shape})"

    # ------------ fields

    def field(self, values: Union[Callable, float, np.ndarray]) -> ScalarField:
        """Build a field from samples, a constant, or a function of the grid coordinates (called by axis name)."""
        if callable(values):
            values = values(**self.grid.mesh())
        return ScalarField(values, self)

    def constant(self, c: float) -> ScalarField:
        return ScalarField(c, self)

    def zeros(self) -> ScalarField:
        return ScalarField(0.0, self)

    def ones(self) -> ScalarField:
        return ScalarField(1.0, self)

    # ------------ frame algebra

    def structure_function(self, k: int, i: int, j: int) -> ScalarField:
        """`c^k_ij`, the `e_k` component of `[e_i, e_j]`."""
        return ScalarField(self.structure[i, j, k], self)

    def frame_derivative(self, f: ScalarField, i: int) -> ScalarField:
        """The derivative `e_i . f` of the field `f` along the `i`-th frame vector."""
        if f.manifold is not self:
            raise GridMismatch(f"Field of {f.manifold.name} differentiated on {self.name}")
        if f.is_constant():
            return self.zeros()

        result = np.zeros(self.grid.shape)
        for axis, coef in self.derivations[i]:
            if np.all(coef == 0):
                continue
            d = grid_derivative(f.values, axis, self.grid.periods[axis], self.scheme)
            result = result + coef * d
        return ScalarField(result, self)

    def is_constant_structure(self) -> bool:
        flat = self.structure.reshape(27, -1)
        return bool(np.all(flat == flat[:, :1]))

    def flow_velocity(self) -> Tuple[np.ndarray, ...]:
        """Grid-coordinate components of `X`, one array per axis."""
        velocity = [np.zeros(self.grid.shape) for _ in range(self.grid.ndim)]
        for axis, coef in self.derivations[X]:
            velocity[axis] = velocity[axis] + coef
        return tuple(velocity)

    def jacobi_residual(self) -> ScalarField:
        """Largest frame component of `sum_cyclic [e_i, [e_j, e_k]]` at each grid point."""
        cyclic = ((X, S, U), (S, U, X), (U, X, S))
        worst = np.zeros(self.grid.shape)
        for comp in range(3):
            total = self.zeros()
            for i, j, k in cyclic:
                total = total + self.frame_derivative(self.structure_function(comp, j, k), i)
                for m in range(3):
                    total = total + self.structure_function(m, j, k) * self.structure_function(comp, i, m)
            worst = np.maximum(worst, np.abs(total.values))
        return ScalarField(worst, self)


def make_sol_suspension(
    kappa: float,
    grid_t: int = 256,
    kappa_s: Optional[float] = None,
    origin: float = 0.0,
    scheme: str = "spectral",
) -> FrameManifold:
    """Suspension of a hyperbolic toral automorphism, with fields depending on the suspension coordinate `t` only.

    The frame satisfies `[X, e_s] = kappa_s e_s`, `[X, e_u] = -kappa e_u` and `[e_s, e_u] = 0`, with `X = d/dt`.
    `kappa_s` defaults to `kappa`, the volume-preserving (unimodular) case.
    """
    kappa_s = kappa if kappa_s is None else kappa_s
    if not (kappa > 0 and kappa_s > 0):
        raise ModelError(f"Expansion rates must be positive, got kappa={kappa}, kappa_s={kappa_s}")

    c = np.zeros((3, 3, 3))
    c[X, S, S], c[S, X, S] = kappa_s, -kappa_s
    c[X, U, U], c[U, X, U] = -kappa, kappa

    name = f"sol(kappa={kappa:.12g})" if kappa_s == kappa else f"sol(kappa={kappa:.12g}, kappa_s={kappa_s:.12g})"
    grid = GridSpec(axes=("t",), shape=(grid_t,), periods=(1.0,), origin=(origin,))
    return FrameManifold(name, grid, c, (((0, 1.0),), (), ()), scheme=scheme)


def make_sl2_frame() -> FrameManifold:
    """Geodesic flow of a hyperbolic surface: `[X, e_s] = e_s`, `[X, e_u] = -e_u`, `[e_s, e_u] = 2X`."""
    c = np.zeros((3, 3, 3))
    c[X, S, S], c[S, X, S] = 1.0, -1.0
    c[X, U, U], c[U, X, U] = -1.0, 1.0
    c[S, U, X], c[U, S, X] = 2.0, -2.0
    return FrameManifold("sl2", GridSpec(), c, ((), (), ()))


def make_abelian_test_frame(grid: Union[int, GridSpec] = 16, scheme: str = "spectral") -> FrameManifold:
    """Commuting frame `(d/dx, d/dy, d/dz)` on the 3-torus, for testing the calculus on genuine grid fields."""
    if not isinstance(grid, GridSpec):
        grid = GridSpec(axes=("x", "y", "z"), shape=(grid,) * 3)
    if grid.ndim != 3 or min(grid.shape) < 8:
        raise ModelError(f"The abelian test frame needs 3 axes of at least 8 samples, got {grid.shape}")
    return FrameManifold("abelian", grid, np.zeros((3, 3, 3)), (((0, 1.0),), ((1, 1.0),), ((2, 1.0),)), scheme)


def rescale_flow(model: FrameManifold, c: float) -> FrameManifold:
    """The same model framed by `(c X, e_s, e_u)` for a constant `c > 0`.

    Structure functions transform as `c^k_ij -> c^k_ij * lambda_i * lambda_j / lambda_k` with `lambda = (c, 1, 1)`.
    """
    if not c > 0:
        raise ModelError(f"Flow rescaling constant must be positive, got {c}")

    lam = np.array([c, 1.0, 1.0])
    factor = np.einsum("i,j,k->ijk", lam, lam, 1 / lam)
    structure = model.structure * factor[(...,) + (None,) * model.grid.ndim]
    derivations = (tuple((axis, c * coef) for axis, coef in model.derivations[X]),) + model.derivations[1:]
    return FrameManifold(f"{model.name}*{c:.12g}", model.grid, structure, derivations, model.scheme)
