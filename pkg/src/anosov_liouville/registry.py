#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Model and pair registry
=======================

Turns the textual model and pair specifications of the command line and of run configurations into objects.

A model specification is a family name optionally followed by parameters::

    sol:catmap
    sol:kappa=1.2,kappa_s=0.8
    sl2
    abelian:n=16

A pair specification is a base pair followed by actions applied from left to right, separated by `|`::

    standard
    counterexample:A=1
    standard|conformal:0.1*sin(2*pi*t)|balance
    file:fixtures/pair.txt|project
"""

from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import compat
from .constructions import (
    DefiningPair,
    balance,
    closed_pair_from_volume,
    conformal_action,
    counterexample_pair,
    gauge_action,
    model_defining_pair,
    normalize_volume,
    project_to_flow,
    retraction,
    skewed_pair,
    standard_pair,
)
from .criteria import ContactFormPair
from .errors import ConfigError, ModelError
from .expressions import sigma_field
from .forms import interior_X
from .frames import CATMAP_KAPPA, FrameManifold, make_abelian_test_frame, make_sl2_frame, make_sol_suspension
from .pair_files import read_pair_file

logger = compat.getLogger("registry")


def parse_params(text: str) -> Dict[str, str]:
    """`"a=1,b=2"` -> `{"a": "1", "b": "2"}`; a bare word `w` is the flag `{"w": ""}`."""
    params = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, _, value = item.partition("=")
        params[key.strip()] = value.strip()
    return params


def _float_param(params: Dict[str, str], key: str, what: str, default: Optional[float] = None) -> Optional[float]:
    if key not in params:
        return default
    try:
        return float(params[key])
    except ValueError:
        raise ConfigError(f"Parameter {key!r} of {what!r} must be a number, got {params[key]!r}")


def _check_keys(params: Dict[str, str], allowed: Tuple[str, ...], what: str):
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise ConfigError(f"Unknown parameter(s) {unknown} for {what!r}. Available parameters: {list(allowed)}")


# ------------ models


class SolSuspension:
    """Suspension of a hyperbolic toral automorphism. `catmap` selects the rate of the cat map [[2, 1], [1, 1]]."""

    params = ("catmap", "kappa", "kappa_s")

    def __call__(self, params: Dict[str, str], grid: int, abelian_grid: int, scheme: str) -> FrameManifold:
        kappa = _float_param(params, "kappa", "sol", CATMAP_KAPPA)
        kappa_s = _float_param(params, "kappa_s", "sol")
        return make_sol_suspension(kappa, grid_t=grid, kappa_s=kappa_s, scheme=scheme)


class Sl2Frame:
    """Geodesic flow of a hyperbolic surface, with constant structure functions."""

    params = ()

    def __call__(self, params: Dict[str, str], grid: int, abelian_grid: int, scheme: str) -> FrameManifold:
        return make_sl2_frame()


class AbelianTorus:
    """Commuting frame on the 3-torus. Not Anosov: only the calculus identities make sense on it."""

    params = ("n",)

    def __call__(self, params: Dict[str, str], grid: int, abelian_grid: int, scheme: str) -> FrameManifold:
        n = _float_param(params, "n", "abelian", abelian_grid)
        return make_abelian_test_frame(int(n), scheme=scheme)


class ModelFamily(Enum):
    """
    All known model families.
    """

    sol = SolSuspension
    sl2 = Sl2Frame
    abelian = AbelianTorus

    def __call__(self, *args, **kwargs):
        """When enum member is called, build the model"""
        return self.value()(*args, **kwargs)

    @property
    def description(self) -> str:
        return self.value.__doc__.strip()

    @classmethod
    def all_names(cls):
        return [s.name for s in cls]

    @classmethod
    def from_str(cls, name) -> "ModelFamily":
        try:
            return cls[name]
        except KeyError:
            raise ModelError(f"Unknown model family {name!r}. Available families: {cls.all_names()}")


def build_model(spec: str, grid: int = 256, abelian_grid: int = 16, scheme: str = "spectral") -> FrameManifold:
    """Build the model described by `spec`, e.g. `sol:catmap`.

    `grid` is the number of samples of the suspension coordinate and `abelian_grid` the number of samples per axis
    of the abelian torus.
    """
    name, _, rest = spec.strip().partition(":")
    family = ModelFamily.from_str(name)
    params = parse_params(rest)
    _check_keys(params, family.value.params, spec)
    model = family(params, grid, abelian_grid, scheme)
    logger.debug("built model %r from %r", model.name, spec)
    return model


# ------------ pairs


class PairContext:
    """What base pairs and actions may depend on: the model, its defining pair, and the directory of relative
    pair-file paths."""

    __slots__ = ("model", "dp", "base_dir")

    def __init__(self, model: FrameManifold, dp: Optional[DefiningPair] = None, base_dir: Path = Path(".")):
        self.model = model
        self.dp = model_defining_pair(model) if dp is None else dp
        self.base_dir = Path(base_dir)

    def volume_tau(self):
        return interior_X(self.dp.dvol)


def _base_standard(ctx: PairContext, arg: str) -> ContactFormPair:
    return standard_pair(ctx.dp)


def _base_counterexample(ctx: PairContext, arg: str) -> ContactFormPair:
    params = parse_params(arg)
    _check_keys(params, ("A",), "counterexample")
    return counterexample_pair(_float_param(params, "A", "counterexample", 1.0), ctx.dp)


def _base_skewed(ctx: PairContext, arg: str) -> ContactFormPair:
    params = parse_params(arg)
    _check_keys(params, ("A",), "skewed")
    return skewed_pair(_float_param(params, "A", "skewed", 1.0), ctx.dp)


def _base_closed(ctx: PairContext, arg: str) -> ContactFormPair:
    return closed_pair_from_volume(standard_pair(ctx.dp), ctx.volume_tau())


def _base_file(ctx: PairContext, arg: str) -> ContactFormPair:
    if not arg:
        raise ConfigError("The 'file' pair needs a path: file:PATH")
    path = Path(arg)
    if not path.is_absolute():
        path = ctx.base_dir / path
    return read_pair_file(path, ctx.model)


BASES: Dict[str, Callable[[PairContext, str], ContactFormPair]] = {
    "standard": _base_standard,
    "counterexample": _base_counterexample,
    "skewed": _base_skewed,
    "closed": _base_closed,
    "file": _base_file,
}


def _act_gauge(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return gauge_action(sigma_field(ctx.model, arg), pair)


def _act_conformal(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return conformal_action(sigma_field(ctx.model, arg), pair)


def _act_balance(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return balance(pair)[1]


def _act_retract(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    params = parse_params(arg)
    _check_keys(params, ("t",), "retract")
    t = _float_param(params, "t", "retract", 1.0)
    try:
        return retraction(pair, t, ctx.dp)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _act_close(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return closed_pair_from_volume(pair, ctx.volume_tau())


def _act_project(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return project_to_flow(pair)


def _act_normalize(ctx: PairContext, pair: ContactFormPair, arg: str) -> ContactFormPair:
    return normalize_volume(pair)


ACTIONS: Dict[str, Callable[[PairContext, ContactFormPair, str], ContactFormPair]] = {
    "gauge": _act_gauge,
    "conformal": _act_conformal,
    "balance": _act_balance,
    "retract": _act_retract,
    "close": _act_close,
    "project": _act_project,
    "normalize": _act_normalize,
}


def _lookup(table: Dict, name: str, what: str):
    try:
        return table[name]
    except KeyError:
        raise ConfigError(f"Unknown {what} {name!r}. Available: {sorted(table)}")


def split_pair_spec(spec: str) -> List[Tuple[str, str]]:
    """`"standard|gauge:0.1*t"` -> `[("standard", ""), ("gauge", "0.1*t")]`."""
    steps = []
    for part in spec.split("|"):
        name, _, arg = part.strip().partition(":")
        if not name:
            raise ConfigError(f"Empty step in pair specification {spec!r}")
        steps.append((name.strip(), arg.strip()))
    return steps


def build_pair(spec: str, ctx: PairContext) -> ContactFormPair:
    """Build the pair described by `spec` on the model of `ctx`."""
    (base, arg), *actions = split_pair_spec(spec)
    pair = _lookup(BASES, base, "base pair")(ctx, arg)
    for name, arg in actions:
        pair = _lookup(ACTIONS, name, "pair action")(ctx, pair, arg)
        logger.debug("applied %s:%s", name, arg)
    return pair
