#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
The `alv` command line
======================

Exit codes: 0 when every check passes, 1 when the command ran but some margin is negative or undecided, 2 when the
command could not run (configuration, pair file or numerical precondition errors).
"""

import logging
from typing import Any, Dict, Optional

import click

from . import __version__, compat
from .commands import COMMANDS
from .config import RunConfig, load_run_config
from .errors import AlvError
from .registry import ModelFamily

logger = compat.getLogger()


class _ClickHandler(logging.Handler):
    """Send log records to stderr through click, so that they do not mix with the JSON report on stdout."""

    def emit(self, record):
        try:
            msg = self.format(record)
            if record.levelno >= logging.WARNING:
                msg = click.style(msg, fg="yellow" if record.levelno == logging.WARNING else "red")
            click.echo(msg, err=True)
        except Exception:  # pragma: no cover
            self.handleError(record)


def _setup_logging(verbose: bool, quiet: bool):
    for handler in list(logger.handlers):
        if isinstance(handler, _ClickHandler):
            logger.removeHandler(handler)
    handler = _ClickHandler()
    handler.setFormatter(logging.Formatter("%(levelname)-7s -  %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.ERROR if quiet else logging.INFO)


def _verbosity(f):
    f = click.option("-q", "--quiet", is_flag=True, help="Silence warnings.")(f)
    f = click.option("-v", "--verbose", is_flag=True, help="Enable verbose output.")(f)
    return f


def _config_options(f):
    """Options shared by the commands that build a model and a pair."""
    options = [
        click.option("--config", "config_file", type=click.Path(dir_okay=False), help="YAML run configuration."),
        click.option("--model", help="Model specification, e.g. 'sol:catmap', 'sl2'."),
        click.option("--pair", help="Pair specification, e.g. 'standard', 'counterexample:A=1'."),
        click.option("--grid", type=int, help="Samples per grid axis of the model."),
        click.option("--tol", type=float, help="Positivity tolerance of strict conditions."),
        click.option("--out", type=click.Path(dir_okay=False), help="Write the JSON report there instead of stdout."),
        click.option("--deterministic", is_flag=True, help="Leave timings out of the report."),
    ]
    for option in reversed(options):
        f = option(f)
    return _verbosity(f)


def _overrides(model, pair, tol, out, deterministic, **extra) -> Dict[str, Any]:
    overrides = {
        "model": model,
        "pair": pair,
        "tolerances": {"tau_pos": tol},
        "output": {"out": out, "deterministic": True if deterministic else None},
    }
    for key, value in extra.items():
        section, _, name = key.partition(".")
        overrides.setdefault(section, {})[name] = value
    return overrides


def _load(config_file: Optional[str], overrides: Dict[str, Any], grid: Optional[int]) -> RunConfig:
    cfg = load_run_config(config_file, overrides)
    if grid is not None:
        # the abelian torus is sampled along 3 axes, the other families along their suspension coordinate
        key = "abelian" if cfg.model.strip().startswith("abelian") else "t"
        overrides.setdefault("grid", {})[key] = grid
        cfg = load_run_config(config_file, overrides)
    return cfg


def _run(name: str, cfg: RunConfig):
    """Run a command, emit its report, and exit with the code of the report."""
    try:
        doc = COMMANDS[name](cfg)
    except AlvError:
        raise
    except (ValueError, ArithmeticError) as e:
        raise AlvError(f"{name} could not run: {e}") from e

    deterministic = cfg.output.deterministic
    if cfg.output.out:
        doc.write(cfg.output.out, deterministic)
    else:
        click.echo(doc.to_json(deterministic), nl=False)

    failed = doc.failed_checks()
    if failed:
        logger.warning("%d check(s) did not pass: %s", len(failed), ", ".join(failed))
    else:
        logger.info("all checks passed")
    raise SystemExit(doc.exit_code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, "-V", "--version", prog_name="alv")
def cli():
    """Numerical verification of Liouville and Anosov-Liouville pairs of contact forms on Anosov flow models."""


@cli.group()
def models():
    """Registered model families."""


@models.command(name="list")
def models_list():
    """List the model families and their parameters."""
    for family in ModelFamily:
        params = ", ".join(family.value.params) or "-"
        click.echo(f"{family.name:10s} params: {params:24s} {family.description}")


@cli.command()
@_config_options
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Dump the invariant fields as CSV.")
def verify(config_file, model, pair, grid, tol, out, deterministic, csv_path, verbose, quiet):
    """Classify a pair and cross-check the classification."""
    _setup_logging(verbose, quiet)
    overrides = _overrides(model, pair, tol, out, deterministic, **{"output.csv": csv_path})
    _run("verify", _load(config_file, overrides, grid))


@cli.command()
@_config_options
@click.option("--epsilon", type=float, help="Width of the smoothing of the linear family.")
@click.option("--tau-steps", type=int, help="Number of interpolation parameters.")
@click.option("--s-range", help="Sampling of s as 'a:b:n'.")
def homotopy(config_file, model, pair, grid, tol, out, deterministic, epsilon, tau_steps, s_range, verbose, quiet):
    """Check positivity along the homotopy from the linear to the exponential family."""
    _setup_logging(verbose, quiet)
    extra = {"sweeps.epsilon": epsilon, "sweeps.tau_steps": tau_steps, "sweeps.s_range": s_range}
    _run("homotopy", _load(config_file, _overrides(model, pair, tol, out, deterministic, **extra), grid))


@cli.command()
@_config_options
@click.option("--T", "horizon", type=float, help="Integration horizon.")
@click.option("--dt", type=float, help="Integration step.")
@click.option("--rescale", type=float, multiple=True, help="Also estimate the exponents of the flow rescaled by c.")
def dynamics(config_file, model, pair, grid, tol, out, deterministic, horizon, dt, rescale, verbose, quiet):
    """Lyapunov exponents and Birkhoff averages of the expansion rates."""
    _setup_logging(verbose, quiet)
    extra = {"dynamics.T": horizon, "dynamics.dt": dt, "dynamics.rescale": list(rescale) or None}
    _run("dynamics", _load(config_file, _overrides(model, pair, tol, out, deterministic, **extra), grid))


@cli.command()
@_config_options
def selftest(config_file, model, pair, grid, tol, out, deterministic, verbose, quiet):
    """Check the calculus identities on every registered model family."""
    _setup_logging(verbose, quiet)
    _run("selftest", _load(config_file, _overrides(model, pair, tol, out, deterministic), grid))


@cli.command(name="dump-fields")
@_config_options
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Where to write the fields as CSV.")
@click.option("--pair-out", type=click.Path(dir_okay=False), help="Where to write the pair as a pair file.")
def dump_fields(config_file, model, pair, grid, tol, out, deterministic, csv_path, pair_out, verbose, quiet):
    """Write the coefficients and invariants of a pair."""
    _setup_logging(verbose, quiet)
    extra = {"output.csv": csv_path, "output.pair_out": pair_out}
    _run("dump-fields", _load(config_file, _overrides(model, pair, tol, out, deterministic, **extra), grid))
