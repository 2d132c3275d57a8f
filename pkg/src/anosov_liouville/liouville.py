#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Liouville forms on R x M and [-1, 1] x M
========================================

For `lambda = u(s) alpha_- + v(s) alpha_+` on a product with `M`,

    d lambda ^ d lambda = 2 D ds ^ dvol,    D = -u u' f_- + u' v g_+ + v' u g_- + v v' f_+,

so every positivity question about such forms reduces to the sign of `D`, a combination of the pair invariants.
This module evaluates `D` for the exponential family `(e^-s, e^s)`, the linear family `(1 - t, 1 + t)`, a smoothed
version of the linear family and the interpolation between the two.
"""

from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from . import compat
from .criteria import ContactFormPair, PairInvariants, pair_invariants
from .errors import EpsilonTooLarge, InvalidProfile, NonContact
from .frames import ScalarField
from .utils import gen_repr

logger = compat.getLogger("liouville")

MAX_EPSILON = 0.01
PROFILE_SAMPLES = 10**4
ORACLE_SAMPLES = 10**4
INEQ_SLACK = 1e-9

ArrayLike = Union[float, np.ndarray]


def _invariant_values(inv: PairInvariants) -> Tuple[np.ndarray, ...]:
    return inv.f_plus.values, inv.f_minus.values, inv.g_plus.values, inv.g_minus.values


def _outer(coef: ArrayLike, values: np.ndarray) -> np.ndarray:
    """`coef[i] * values` stacked along a new first axis (or a plain product for scalar `coef`)."""
    coef = np.asarray(coef, dtype=float)
    return np.multiply.outer(coef, values) if coef.ndim else coef * values


def _density_values(inv: PairInvariants, u: ArrayLike, du: ArrayLike, v: ArrayLike, dv: ArrayLike) -> np.ndarray:
    fp, fm, gp, gm = _invariant_values(inv)
    u, du, v, dv = (np.asarray(c, dtype=float) for c in (u, du, v, dv))
    return _outer(-u * du, fm) + _outer(du * v, gp) + _outer(dv * u, gm) + _outer(v * dv, fp)


def liouville_density(inv: PairInvariants, u: float, du: float, v: float, dv: float) -> ScalarField:
    """The density `D` of `d lambda ^ d lambda / (2 ds ^ dvol)` for `lambda = u alpha_- + v alpha_+` at one value
    of `s`, given `u, u', v, v'` there."""
    return ScalarField(_density_values(inv, u, du, v, dv), inv.manifold)


def exp_liouville_density(inv: PairInvariants, s: float) -> ScalarField:
    """`e^2s f_+ + f_0 + e^-2s f_-`, the density of `e^-s alpha_- + e^s alpha_+`."""
    return inv.f_plus * float(np.exp(2 * s)) + inv.f_zero + inv.f_minus * float(np.exp(-2 * s))


def lin_liouville_density(inv: PairInvariants, t: float) -> ScalarField:
    """`f_+ + f_- + g_- - g_+ + t (f_+ - f_- - g_- - g_+)`, the density of `(1 - t) alpha_- + (1 + t) alpha_+`."""
    slope = inv.f_plus - inv.f_minus - inv.g_minus - inv.g_plus
    return inv.f_plus + inv.f_minus + inv.g_minus - inv.g_plus + slope * t


def _positive_invariants(pair: ContactFormPair, inv: Optional[PairInvariants]) -> PairInvariants:
    if inv is None:
        inv = pair_invariants(pair)
    if inv.f_plus.min() <= 0 or inv.f_minus.min() <= 0:
        raise NonContact(
            f"Exponential margins need f_+ > 0 and f_- > 0, got min f_+ = {inv.f_plus.min():.6g}, "
            f"min f_- = {inv.f_minus.min():.6g}"
        )
    return inv


def exp_liouville_margin(pair: ContactFormPair, inv: Optional[PairInvariants] = None) -> Dict[str, float]:
    """Closed-form margins of the exponential family: the minimum over `s` of the density is
    `f_0 + 2 sqrt(f_- f_+)`, attained at `s = ln(f_- / f_+) / 4`.

    Returns `{'liouville': min(f_0 + 2 sqrt(f_- f_+)), 'AL': min(2 sqrt(f_- f_+) - |f_0|)}`.

    Raises
    ------
    NonContact
        If `f_+` or `f_-` is not positive.
    """
    inv = _positive_invariants(pair, inv)
    root = 2 * np.sqrt(inv.f_minus * inv.f_plus)
    return {"liouville": (inv.f_zero + root).min(), "AL": (root - np.abs(inv.f_zero)).min()}


def exp_s_window(inv: PairInvariants) -> float:
    """Half-width `S` of an `s`-window containing every minimiser `ln(f_- / f_+) / 4`, padded by 1."""
    return 1.0 + 0.25 * float(np.max(np.abs(np.log(inv.f_minus.values / inv.f_plus.values))))


def exp_liouville_oracle(
    pair: ContactFormPair, inv: Optional[PairInvariants] = None, n_samples: int = ORACLE_SAMPLES
) -> Dict[str, float]:
    """Brute-force version of `exp_liouville_margin`: minimum of the density over `n_samples` values of `s` in
    `[-S, S]` and over the grid, for both `(alpha_-, alpha_+)` and `(-alpha_-, alpha_+)`."""
    inv = _positive_invariants(pair, inv)
    window = exp_s_window(inv)
    s = np.linspace(-window, window, n_samples)
    u, v = np.exp(-s), np.exp(s)
    direct = float(np.min(_density_values(inv, u, -u, v, v)))
    flipped = float(np.min(_density_values(inv.flipped(), u, -u, v, v)))
    return {"liouville": direct, "AL": min(direct, flipped)}


# ------------ smoothing of the linear family


class BumpProfile:
    """A convex non-decreasing `C^2` function with `phi(s) = 0` for `s <= -1 - epsilon` and `phi(s) = 1 + s` for
    `s >= -1 + epsilon`.

    In the transition zone, with `x = (s + 1 + epsilon) / (2 epsilon)`, `phi' = 10 x^3 - 15 x^4 + 6 x^5` is the
    quintic smoothstep.
    """

    __slots__ = ("epsilon",)

    __repr__ = gen_repr()

    def __init__(self, epsilon: float):
        self.epsilon = epsilon

    def _x(self, s: ArrayLike) -> np.ndarray:
        return np.clip((np.asarray(s, dtype=float) + 1 + self.epsilon) / (2 * self.epsilon), 0.0, 1.0)

    def phi(self, s: ArrayLike) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        x = self._x(s)
        inner = 2 * self.epsilon * x**4 * (x * x - 3 * x + 2.5)
        return np.where(s >= -1 + self.epsilon, 1 + s, inner)

    def dphi(self, s: ArrayLike) -> np.ndarray:
        x = self._x(s)
        return x**3 * (10 - 15 * x + 6 * x * x)

    def ddphi(self, s: ArrayLike) -> np.ndarray:
        x = self._x(s)
        return 30 * x * x * (1 - x) ** 2 / (2 * self.epsilon)


def check_profile(profile: BumpProfile, s: np.ndarray, tol: float = 1e-15):
    """Check the shape of `profile` on the samples `s`.

    Raises
    ------
    InvalidProfile
        If one of `phi >= 0`, `0 <= phi' <= 1`, `phi'' >= 0` or `phi` non-decreasing fails on a sample.
    """
    phi, dphi, ddphi = profile.phi(s), profile.dphi(s), profile.ddphi(s)
    checks = {
        "phi >= 0": phi >= -tol,
        "phi' >= 0": dphi >= -tol,
        "phi' <= 1": dphi <= 1 + tol,
        "phi'' >= 0": ddphi >= -tol,
        "phi non-decreasing": np.append(np.diff(phi) >= -tol, True),
    }
    for name, ok in checks.items():
        if not np.all(ok):
            bad = int(np.argmin(ok))
            raise InvalidProfile(f"bump profile with epsilon={profile.epsilon} breaks {name} at s = {s[bad]:.6g}")


def build_bump(epsilon: float, max_epsilon: float = MAX_EPSILON, n_samples: int = PROFILE_SAMPLES) -> BumpProfile:
    """Build the profile and check it on `n_samples` points of `[-1 - 2 epsilon, 0]`.

    Raises
    ------
    EpsilonTooLarge
        If `epsilon` is not in `(0, max_epsilon]`.

    InvalidProfile
        If a sampled value breaks `phi >= 0`, `0 <= phi' <= 1`, `phi'' >= 0` or the monotonicity of `phi`.
    """
    if not 0 < epsilon <= max_epsilon:
        raise EpsilonTooLarge(f"epsilon must be in (0, {max_epsilon}], got {epsilon}")

    profile = BumpProfile(epsilon)
    s = np.linspace(-1 - 2 * epsilon, 0.0, n_samples)
    check_profile(profile, s)
    return profile


def step1_density(inv: PairInvariants, profile: BumpProfile, s: float) -> ScalarField:
    """Density of `phi(-s) alpha_- + phi(s) alpha_+`, which is the linear family for `|s| <= 1 - epsilon`."""
    u, du = profile.phi(-s), -profile.dphi(-s)
    v, dv = profile.phi(s), profile.dphi(s)
    return liouville_density(inv, float(u), float(du), float(v), float(dv))


def step1_s_values(profile: BumpProfile, s_max: float = 5.0, n_samples: int = 512) -> np.ndarray:
    """Sample points of `[-s_max, s_max]`, refined in both transition zones."""
    eps = profile.epsilon
    zone = np.linspace(1 - 2 * eps, 1 + 2 * eps, 65)
    return np.unique(np.concatenate([np.linspace(-s_max, s_max, n_samples), zone, -zone]))


def step1_sweep(inv: PairInvariants, profile: BumpProfile, s_values: Sequence[float]) -> Tuple[float, Dict]:
    """Minimum of `step1_density` over `s_values` and the grid, and where it is attained."""
    s = np.asarray(s_values, dtype=float)
    values = _density_values(inv, profile.phi(-s), -profile.dphi(-s), profile.phi(s), profile.dphi(s))
    index = np.unravel_index(np.argmin(values), values.shape)
    location = {"s": float(s[index[0]]), "point": inv.manifold.grid.point(index[1:])}
    return float(values[index]), location


class InterpolationFamily:
    """`psi_tau(s) = tau e^s + (1 - tau) phi(s)`, with `a_tau(s) = psi(-s) / psi(s)` and
    `b_tau(s) = psi'(-s) / psi'(s)`."""

    __slots__ = ("profile", "tau")

    __repr__ = gen_repr()

    def __init__(self, profile: BumpProfile, tau: float):
        self.profile = profile
        self.tau = tau

    def psi(self, s: ArrayLike) -> np.ndarray:
        return self.tau * np.exp(s) + (1 - self.tau) * self.profile.phi(s)

    def dpsi(self, s: ArrayLike) -> np.ndarray:
        return self.tau * np.exp(s) + (1 - self.tau) * self.profile.dphi(s)

    def a(self, s: ArrayLike) -> np.ndarray:
        return self.psi(-np.asarray(s)) / self.psi(s)

    def b(self, s: ArrayLike) -> np.ndarray:
        return self.dpsi(-np.asarray(s)) / self.dpsi(s)


def _reduced_density(fp, fm, gp, gm, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """`f_+ + a g_- - b g_+ + a b f_-` on `s >= 0`, stacked over the samples of `a` and `b`."""
    return fp + _outer(a, gm) - _outer(b, gp) + _outer(a * b, fm)


class HomotopyReport:
    """Outcome of the positivity sweep of the interpolation between the linear and exponential families."""

    __slots__ = ("epsilon", "tau_steps", "min_density", "location", "a_range", "b_range", "ineq_min", "passed")

    __repr__ = gen_repr()

    def __init__(self, epsilon, tau_steps, min_density, location, a_range, b_range, ineq_min, passed):
        self.epsilon = epsilon
        self.tau_steps = tau_steps
        self.min_density = min_density
        self.location = location
        self.a_range = a_range
        self.b_range = b_range
        self.ineq_min = ineq_min
        self.passed = passed

    def to_dict(self) -> Dict:
        return {k: getattr(self, k) for k in self.__slots__}


def homotopy_positivity_check(
    inv: PairInvariants,
    epsilon: float = MAX_EPSILON,
    tau_steps: int = 64,
    s_values: Optional[Sequence[float]] = None,
    tol: float = 1e-9,
    max_epsilon: float = MAX_EPSILON,
) -> HomotopyReport:
    """Sweep `tau` over `tau_steps` values of `[0, 1]` and `s` over `s_values` (in `[0, inf)`) and check

     - the density `f_+ + a g_- - b g_+ + a b f_-` and its mirror `f_- - a g_+ + b g_- + a b f_+` (the `s <= 0`
       half, obtained by swapping `(f_+, g_+)` with `(f_-, -g_-)`) are positive,
     - `0 <= a_tau, b_tau <= 1`,
     - `b_tau - a_tau >= -epsilon`.

    Negative minima are reported as a failure, not raised.
    """
    profile = build_bump(epsilon, max_epsilon)
    s = np.linspace(0.0, 5.0, 512) if s_values is None else np.asarray(s_values, dtype=float)
    if np.any(s < 0):
        raise ValueError("homotopy s-samples must be non-negative, the s <= 0 half is handled by symmetry")

    fp, fm, gp, gm = _invariant_values(inv)
    best = (np.inf, None)
    a_lo, a_hi, b_lo, b_hi, ineq = np.inf, -np.inf, np.inf, -np.inf, np.inf
    for tau in tqdm(np.linspace(0.0, 1.0, tau_steps), desc="homotopy... ", leave=False, disable=None):
        family = InterpolationFamily(profile, float(tau))
        a, b = family.a(s), family.b(s)
        a_lo, a_hi = min(a_lo, float(a.min())), max(a_hi, float(a.max()))
        b_lo, b_hi = min(b_lo, float(b.min())), max(b_hi, float(b.max()))
        ineq = min(ineq, float(np.min(b - a)))

        for zone, values in (
            ("s>=0", _reduced_density(fp, fm, gp, gm, a, b)),
            ("s<=0", _reduced_density(fm, fp, -gm, -gp, a, b)),
        ):
            index = np.unravel_index(np.argmin(values), values.shape)
            if values[index] < best[0]:
                sign = 1 if zone == "s>=0" else -1
                point = inv.manifold.grid.point(index[1:])
                best = (float(values[index]), {"tau": float(tau), "s": sign * float(s[index[0]]), "point": point})

    passed = (
        best[0] > tol
        and a_lo >= -tol
        and b_lo >= -tol
        and a_hi <= 1 + tol
        and b_hi <= 1 + tol
        and ineq >= -epsilon - INEQ_SLACK
    )
    logger.info("homotopy sweep: min density %.12g at %s, min(b - a) = %.3g", best[0], best[1], ineq)
    return HomotopyReport(epsilon, tau_steps, best[0], best[1], (a_lo, a_hi), (b_lo, b_hi), ineq, passed)
