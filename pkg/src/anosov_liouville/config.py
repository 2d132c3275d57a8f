#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Run configuration
=================

The configuration of an `alv` run is a class-based mkdocs `Config` schema. Values come, lowest priority first, from
the defaults below, from a YAML file (`--config PATH`, or the `ALV_CONFIG` environment variable), and from
command-line flags.

>>> cfg = load_run_config(overrides={"sweeps": {"s_range": "0:2:5"}})
>>> cfg.model, cfg.sweeps.s_range
('sol:catmap', (0.0, 2.0, 5))
"""

import os
from copy import deepcopy
from difflib import get_close_matches
from pathlib import Path
from typing import Any, Dict, Optional, Union

from mkdocs.config import base
from mkdocs.config import config_options as co
from mkdocs.config.base import ValidationError
from mkdocs.utils import yaml_load

from . import compat
from .errors import ConfigError

logger = compat.getLogger("config")

CONFIG_ENV_VAR = "ALV_CONFIG"


class PositiveFloat(co.OptionallyRequired):
    """A strictly positive number, returned as a float"""

    def run_validation(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"Expected a number but received: {value!r}")
        if not value > 0:
            raise ValidationError(f"Expected a positive number but received: {value!r}")
        return float(value)


class IntAtLeast(co.OptionallyRequired):
    """An integer larger than or equal to `minimum`"""

    def __init__(self, minimum: int, **kwargs):
        super().__init__(**kwargs)
        self.minimum = minimum

    def run_validation(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"Expected an integer but received: {value!r}")
        if value < self.minimum:
            raise ValidationError(f"Expected an integer >= {self.minimum} but received: {value!r}")
        return value


class SRange(co.OptionallyRequired):
    """A sampling range `a:b:n` (or `[a, b, n]`) of `n >= 2` points with `0 <= a < b`, returned as a tuple"""

    def run_validation(self, value):
        parts = value.split(":") if isinstance(value, str) else value
        if not isinstance(parts, (list, tuple)) or len(parts) != 3:
            raise ValidationError(f"Expected a range 'a:b:n' but received: {value!r}")
        try:
            a, b = float(parts[0]), float(parts[1])
            n = int(parts[2])
        except (TypeError, ValueError):
            raise ValidationError(f"Expected a range 'a:b:n' of numbers but received: {value!r}")
        if not (0 <= a < b and n >= 2):
            raise ValidationError(f"Expected 0 <= a < b and n >= 2 in the range 'a:b:n', received: {value!r}")
        return a, b, n


class ConfigList(co.OptionallyRequired):
    """A list or single element of configuration matching a specific ConfigOption"""

    def __init__(self, item_config: co.BaseConfigOption, single_elt_allowed: bool = True, **kwargs):
        super().__init__(**kwargs)
        self.single_elt_allowed = single_elt_allowed
        self.item_config = item_config

    def run_validation(self, value):
        if not isinstance(value, (list, tuple)):
            if self.single_elt_allowed:
                value = (value,)
            else:
                raise ValidationError(f"Expected a list but received a single element: {value}.")

        result = []
        for i, v in enumerate(value):
            try:
                result.append(self.item_config.validate(v))
            except ValidationError as e:
                raise ValidationError(f"Error validating config item #{i+1}: {e}")
        return result


class _GridOptions(base.Config):
    t = IntAtLeast(4, default=256)
    abelian = IntAtLeast(8, default=16)
    scheme = co.Choice(("spectral", "fd"), default="spectral")


class _ToleranceOptions(base.Config):
    tau_pos = PositiveFloat(default=1e-9)
    residual = PositiveFloat(default=1e-9)
    equality = PositiveFloat(default=1e-9)
    volume = PositiveFloat(default=1e-12)


class _SweepOptions(base.Config):
    retraction_samples = IntAtLeast(2, default=33)
    tau_steps = IntAtLeast(1, default=64)
    s_range = SRange(default="0:5:512")
    epsilon = PositiveFloat(default=0.01)
    max_epsilon = PositiveFloat(default=0.01)
    oracle_samples = IntAtLeast(2, default=10**4)


class _DynamicsOptions(base.Config):
    T = PositiveFloat(default=50.0)
    dt = PositiveFloat(default=1e-3)
    orbits = IntAtLeast(1, default=4)
    # constant rescalings c of the flow whose exponents are also reported
    rescale = ConfigList(PositiveFloat(), default=[])


class _OutputOptions(base.Config):
    out = co.Optional(co.Type(str))
    csv = co.Optional(co.Type(str))
    pair_out = co.Optional(co.Type(str))
    deterministic = co.Type(bool, default=False)


class RunConfig(base.Config):
    """Everything an `alv` command needs."""

    model = co.Type(str, default="sol:catmap")
    pair = co.Type(str, default="standard")
    grid = co.SubConfig(_GridOptions)
    tolerances = co.SubConfig(_ToleranceOptions)
    sweeps = co.SubConfig(_SweepOptions)
    dynamics = co.SubConfig(_DynamicsOptions)
    output = co.SubConfig(_OutputOptions)


def _unknown_keys(raw: Dict, config_class, prefix: str = ""):
    """Raise a `ConfigError` listing the keys of `raw` that `config_class` does not know, with close matches."""
    schema = dict(config_class._schema)
    extra_keys = sorted(set(raw) - set(schema))
    if extra_keys:
        msg = "Unknown key(s) in the run configuration:\n"
        for key in extra_keys:
            options = get_close_matches(key, sorted(schema), cutoff=0.66)
            msg += repr(prefix + key)
            if len(options) == 1:
                msg += ", did you mean %r?" % (prefix + options[0],)
            elif len(options) > 1:
                msg += ", did you mean one of %r?" % ([prefix + o for o in options],)
            msg += "\n"
        raise ConfigError(msg.strip())

    for key, value in raw.items():
        option = schema[key]
        if isinstance(option, co.SubConfig) and isinstance(value, dict):
            _unknown_keys(value, option.config_class, prefix=f"{prefix}{key}.")


def _merge(into: Dict, patch: Dict) -> Dict:
    for key, value in patch.items():
        if isinstance(value, dict) and isinstance(into.get(key), dict):
            _merge(into[key], value)
        else:
            into[key] = value
    return into


def load_run_config(path: Union[str, Path, None] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Load and validate a run configuration.

    Parameters
    ----------
    path : str or Path, optional
        A YAML file. When omitted, the file named by the `ALV_CONFIG` environment variable is used if it is set.

    overrides : dict, optional
        Values that take precedence over the file, nested like the file (`{"sweeps": {"epsilon": 0.005}}`). `None`
        values are ignored, so that unset command-line flags do not hide the file.

    Raises
    ------
    ConfigError
        If the file can not be read, has unknown keys, or holds invalid values.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None

    raw: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as f:
                raw = yaml_load(f) or {}
        except OSError as e:
            raise ConfigError(f"Can not read configuration file {path}: {e}") from e
        except Exception as e:
            raise ConfigError(f"Invalid YAML in configuration file {path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"Configuration file {path} must hold a mapping, got {type(raw).__name__}")
        logger.info("loaded configuration file %s", path)

    raw = _merge(deepcopy(raw), _drop_none(overrides or {}))
    _unknown_keys(raw, RunConfig)

    cfg = RunConfig(config_file_path=None if path is None else str(path))
    cfg.load_dict(raw)
    errors, warnings = cfg.validate()
    for key, warning in warnings:
        logger.warning("configuration %r: %s", key, warning)
    if errors:
        msg = "\n".join(f"{key!r}: {err}" for key, err in errors)
        raise ConfigError(f"Invalid run configuration:\n{msg}")
    return cfg


def _drop_none(d: Dict) -> Dict:
    return {k: (_drop_none(v) if isinstance(v, dict) else v) for k, v in d.items() if v is not None}


def config_dir(cfg: RunConfig) -> Path:
    """The directory of the configuration file (relative pair files are found there), or the current directory."""
    return Path(cfg.config_file_path).parent if cfg.config_file_path else Path(".")


def config_echo(cfg: base.Config) -> Dict[str, Any]:
    """A plain, JSON-friendly copy of a validated configuration."""
    result = {}
    for key, value in cfg.items():
        if isinstance(value, base.Config):
            value = config_echo(value)
        elif isinstance(value, tuple):
            value = list(value)
        result[key] = value
    return result
