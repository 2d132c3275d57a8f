#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Commands
========

The work behind each `alv` subcommand. Every command takes a validated `RunConfig` and returns a `ReportDocument`;
writing the outputs and turning the document into an exit code is left to the caller.
"""

from functools import reduce
from typing import Dict, Tuple

import numpy as np
from tqdm import tqdm

from . import compat
from .config import RunConfig, config_dir, config_echo
from .constructions import (
    DefiningPair,
    extract,
    invariants_from_sigma,
    model_defining_pair,
    pair_from_sigma,
    retraction_path,
    standard_pair,
)
from .criteria import (
    ContactFormPair,
    Margin,
    classify_pair,
    closedness_field,
    divergence_bounds,
    frame_determinant,
    frame_determinant_margin,
    pair_invariants,
    reeb_criteria,
    reeb_data,
    supports_flow,
)
from .dynamics import lyapunov_cocycle, volume_preservation_test
from .errors import AlvError, ConfigError
from .forms import OneForm, differential, exterior_d, exterior_d_2, flow_pullback, lie_X, wedge_1_1
from .frames import FrameManifold, ScalarField, rescale_flow
from .liouville import (
    build_bump,
    exp_liouville_margin,
    exp_liouville_oracle,
    homotopy_positivity_check,
    step1_s_values,
    step1_sweep,
)
from .pair_files import write_pair_file
from .registry import ModelFamily, PairContext, build_model, build_pair
from .report import ReportDocument, summarize_field, write_fields_csv

logger = compat.getLogger("commands")

# agreement required between the closed-form and sampled exponential margins, and between exponent estimates
ORACLE_TOL = 1e-6
DYNAMICS_TOL = 1e-6

# calculus identities checked by the self-test
D_SQUARED_TOL = 1e-8
LEIBNIZ_TOL = 1e-8
CARTAN_TOL = 1e-6
CARTAN_STEP = 1e-3


def load_model(cfg: RunConfig) -> FrameManifold:
    return build_model(cfg.model, grid=cfg.grid.t, abelian_grid=cfg.grid.abelian, scheme=cfg.grid.scheme)


def load_pair(cfg: RunConfig) -> Tuple[PairContext, ContactFormPair]:
    """Build the model and the pair of `cfg`."""
    ctx = PairContext(load_model(cfg), base_dir=config_dir(cfg))
    pair = build_pair(cfg.pair, ctx)
    logger.info("pair %r on %s", cfg.pair, ctx.model.name)
    return ctx, pair


def _summaries(fields: Dict[str, ScalarField]) -> Dict[str, Dict]:
    return {name: summarize_field(f) for name, f in fields.items()}


def _worst(form) -> ScalarField:
    """Pointwise largest absolute coefficient of a form."""
    return reduce(np.maximum, [np.abs(c) for c in form.components])


def _deviation_from(name: str, distance: float, tol: float) -> Margin:
    return Margin(name, -distance, {}, False, tol)


# ------------ verify


def _sigma_checks(doc: ReportDocument, pair: ContactFormPair, ctx: PairContext, cfg: RunConfig):
    """Extract `(sigma_s, sigma_u)`, rebuild the pair from them, and retract it."""
    tol = cfg.tolerances.residual
    try:
        sig, dp = extract(pair, ctx.dp)
    except AlvError as e:
        logger.warning("sigma extraction failed: %s", e)
        doc.add_section("sigma", {"error": str(e)})
        doc.add_checks("sigma", Margin("sigma_roundtrip", -np.inf, {}, False, tol))
        return

    rebuilt = pair_from_sigma(sig, dp)
    doc.add_checks("sigma", _deviation_from("sigma_roundtrip", rebuilt.sup_distance(pair), tol))

    direct = pair_invariants(pair.with_dvol(dp.dvol), cfg.tolerances.volume)
    f_plus, f_minus, f_zero = invariants_from_sigma(sig, dp)
    mismatch = max(
        f_plus.sup_distance(direct.f_plus), f_minus.sup_distance(direct.f_minus), f_zero.sup_distance(direct.f_zero)
    )
    doc.add_checks("sigma", _deviation_from("sigma_invariants", mismatch, tol))
    doc.add_section(
        "sigma",
        {
            "sigma_s": summarize_field(sig.sigma_s),
            "sigma_u": summarize_field(sig.sigma_u),
            "slack": summarize_field(sig.slack(dp)),
            "kind": dp.kind(),
            "r_s": summarize_field(dp.r_s),
            "r_u": summarize_field(dp.r_u),
        },
    )

    path = retraction_path(pair, ctx.dp, cfg.sweeps.retraction_samples)
    margins = [classify_pair(pair_invariants(p), cfg.tolerances.tau_pos)["AL"].value for _, p in path]
    worst_step = float(min(np.diff(margins).min(), 0.0))
    doc.add_checks("retraction", Margin("monotone_AL", worst_step, {}, False, cfg.tolerances.equality))
    doc.add_checks("retraction", _deviation_from("start", path[0][1].sup_distance(pair), tol))
    doc.add_checks("retraction", _deviation_from("end", path[-1][1].sup_distance(standard_pair(dp)), tol))
    doc.add_section("retraction", {"t": [t for t, _ in path], "AL": margins})


def cmd_verify(cfg: RunConfig) -> ReportDocument:
    """Classify the pair of `cfg` and cross-check the classification with Reeb fields and sigma extraction."""
    doc = ReportDocument("verify", config_echo(cfg))
    tol, eq_tol = cfg.tolerances.tau_pos, cfg.tolerances.equality

    with doc.timed("build"):
        ctx, pair = load_pair(cfg)

    with doc.timed("classify"):
        inv = pair_invariants(pair, cfg.tolerances.volume)
        report = classify_pair(inv, tol, eq_tol)
        doc.add_checks("classification", report)
        doc.add_checks("bicontact", supports_flow(pair, tol, eq_tol))
        doc.add_section("model", {"name": ctx.model.name, "grid": list(ctx.model.grid.shape)})
        fields = dict(inv.items())
        fields["closedness"] = closedness_field(pair, cfg.tolerances.volume)
        doc.add_section("invariants", _summaries(fields))

    contact = report["contact_minus"].flag and report["contact_plus"].flag
    if not contact:
        doc.add_section("reeb", {"skipped": "the forms are not contact forms of their sign"})
        return doc

    with doc.timed("exponential"):
        closed_form = exp_liouville_margin(pair, inv)
        oracle = exp_liouville_oracle(pair, inv, cfg.sweeps.oracle_samples)
        gap = max(abs(closed_form[k] - oracle[k]) for k in closed_form)
        doc.add_checks("exponential", _deviation_from("oracle_agreement", gap, ORACLE_TOL))
        lower, upper = divergence_bounds(pair, inv)
        doc.add_section(
            "exponential",
            {
                "closed_form": closed_form,
                "oracle": oracle,
                "divergence": summarize_field(lower),
                "divergence_bound": summarize_field(upper),
            },
        )

    with doc.timed("reeb"):
        data = reeb_data(pair, ctx.dp, cfg.tolerances.residual)
        reeb_fields, reeb_report = reeb_criteria(pair, tol, data)
        # the sum criterion characterises AL pairs only when they are balanced
        if report["balanced"].flag:
            doc.add_checks("reeb", reeb_report["reeb_sum"])
        doc.add_checks("reeb", reeb_report["reeb_lin"])
        det = frame_determinant(pair, data)
        doc.add_checks("reeb", frame_determinant_margin(det, tol))
        doc.add_section(
            "reeb",
            {
                "residual": data.residual,
                "pairings": _summaries(data.pairings),
                "sum": summarize_field(reeb_fields["sum"]),
                "reeb_sum": reeb_report["reeb_sum"].to_dict(),
                "frame_determinant": summarize_field(det),
            },
        )

    if report["AL"].flag:
        with doc.timed("sigma"):
            _sigma_checks(doc, pair, ctx, cfg)
    else:
        doc.add_section("sigma", {"skipped": "the pair is not AL"})

    if cfg.output.csv:
        fields.update({f"reeb.{k}": v for k, v in reeb_fields.items()})
        write_fields_csv(cfg.output.csv, fields)
    return doc


# ------------ homotopy


def cmd_homotopy(cfg: RunConfig) -> ReportDocument:
    """Check positivity along the smoothing of the linear family and its interpolation with the exponential one.

    Raises
    ------
    AlvError
        If the pair is not both Liouville and linear-Liouville, the two families the construction joins.

    EpsilonTooLarge
        If the configured epsilon exceeds its maximum.
    """
    doc = ReportDocument("homotopy", config_echo(cfg))
    tol = cfg.tolerances.tau_pos
    ctx, pair = load_pair(cfg)
    inv = pair_invariants(pair, cfg.tolerances.volume)
    margins = classify_pair(inv, tol, cfg.tolerances.equality)
    for name, family in (("liouville", "Liouville"), ("lin_liouville", "linear-Liouville")):
        if not margins[name].flag:
            raise AlvError(f"pair is not {family} ({name} margin {margins[name].value:.6g})")
    doc.add_checks("precondition", {name: margins[name] for name in ("liouville", "lin_liouville")})

    sweeps = cfg.sweeps
    profile = build_bump(sweeps.epsilon, sweeps.max_epsilon, sweeps.oracle_samples)
    a, b, n = sweeps.s_range

    with doc.timed("step1"):
        minimum, where = step1_sweep(inv, profile, step1_s_values(profile, b, n))
        doc.add_checks("step1", Margin("density", minimum, where, True, tol))

    with doc.timed("interpolation"):
        result = homotopy_positivity_check(
            inv, sweeps.epsilon, sweeps.tau_steps, np.linspace(a, b, n), tol, sweeps.max_epsilon
        )
        (a_lo, a_hi), (b_lo, b_hi) = result.a_range, result.b_range
        doc.add_checks("interpolation", Margin("density", result.min_density, result.location or {}, True, tol))
        doc.add_checks("interpolation", Margin("ab_range", min(a_lo, b_lo, 1 - a_hi, 1 - b_hi), {}, False, tol))
        doc.add_checks("interpolation", Margin("b_minus_a", result.ineq_min + sweeps.epsilon, {}, False, tol))
        doc.add_section("interpolation", result.to_dict())
    return doc


# ------------ dynamics


def _exponents(model: FrameManifold, dp: DefiningPair, cfg: RunConfig) -> Dict:
    return lyapunov_cocycle(model, dp, T=cfg.dynamics.T, dt=cfg.dynamics.dt).to_dict()


def cmd_dynamics(cfg: RunConfig) -> ReportDocument:
    """Lyapunov exponents and Birkhoff averages of the expansion rates along orbits of the flow."""
    doc = ReportDocument("dynamics", config_echo(cfg))
    tol = cfg.tolerances.residual
    model = load_model(cfg)
    dp = model_defining_pair(model)

    with doc.timed("lyapunov"):
        est = _exponents(model, dp, cfg)
        drift = max(abs(est["Lambda_u"] - est["birkhoff_u"]), abs(est["Lambda_s"] - est["birkhoff_s"]))
        doc.add_checks("lyapunov", _deviation_from("birkhoff_agreement", drift, DYNAMICS_TOL))
        doc.add_section("lyapunov", est)

    with doc.timed("volume"):
        volume = volume_preservation_test(model, dp, cfg.dynamics.orbits, cfg.dynamics.T, cfg.dynamics.dt)
        if dp.is_volume_preserving():
            doc.add_checks("volume", _deviation_from("birkhoff_divergence", volume.residual, tol))
        doc.add_section("volume", dict(volume.to_dict(), volume_preserving=dp.is_volume_preserving()))

    rescaled = {}
    for c in tqdm(cfg.dynamics.rescale, desc="rescaled flows... ", leave=False, disable=None):
        model_c = rescale_flow(model, c)
        est_c = _exponents(model_c, dp.rescaled(model_c), cfg)
        drift = max(abs(est_c["Lambda_u"] - c * est["Lambda_u"]), abs(est_c["Lambda_s"] - c * est["Lambda_s"]))
        doc.add_checks("rescaled", _deviation_from(f"c={c:g}", drift, DYNAMICS_TOL))
        rescaled[f"{c:g}"] = est_c
    if rescaled:
        doc.add_section("rescaled", rescaled)
    return doc


# ------------ selftest


def _sample_field(model: FrameManifold, k: int) -> ScalarField:
    """A smooth test function with a single Fourier mode per axis."""
    mesh = model.grid.mesh()
    values = sum((np.sin(2 * np.pi * c + 0.7 * (k + 1) * (a + 1)) for a, c in enumerate(mesh.values())), 0.0)
    return model.field(values)


def _sample_form(model: FrameManifold) -> OneForm:
    w0, w1, w2 = (_sample_field(model, k) for k in range(3))
    return OneForm(0.3 + 0.2 * w0, 1 + 0.1 * w1, -0.5 + 0.3 * w2)


def _cartan_vs_pullback(omega: OneForm) -> ScalarField:
    """`L_X omega` minus the Richardson-extrapolated central difference of the pullbacks."""

    def central(h):
        return (flow_pullback(omega, h) - flow_pullback(omega, -h)) / (2 * h)

    h = CARTAN_STEP
    numeric = (central(h / 2) * 4 - central(h)) / 3
    return _worst(lie_X(omega) - numeric)


def selftest_model(model: FrameManifold) -> Dict[str, Margin]:
    """Calculus identities on one model."""
    omega, f = _sample_form(model), 1 + 0.5 * _sample_field(model, 3)
    leibniz = exterior_d(omega * f) - (wedge_1_1(differential(f), omega) + exterior_d(omega) * f)
    margins = {
        "jacobi": Margin.deviation("jacobi", model.jacobi_residual(), D_SQUARED_TOL),
        "d_squared_1": Margin.deviation("d_squared_1", exterior_d_2(exterior_d(omega)).c, D_SQUARED_TOL),
        "d_squared_0": Margin.deviation("d_squared_0", _worst(exterior_d(differential(f))), D_SQUARED_TOL),
        "leibniz": Margin.deviation("leibniz", _worst(leibniz), LEIBNIZ_TOL),
    }
    try:
        margins["cartan"] = Margin.deviation("cartan", _cartan_vs_pullback(omega), CARTAN_TOL)
    except AlvError as e:
        logger.info("no Cartan-vs-pullback check on %s: %s", model.name, e)
    return margins


def cmd_selftest(cfg: RunConfig) -> ReportDocument:
    """Run the calculus identities on every registered model family."""
    doc = ReportDocument("selftest", config_echo(cfg))
    for family in tqdm(ModelFamily, desc="selftest... ", leave=False, disable=None):
        model = build_model(family.name, grid=cfg.grid.t, abelian_grid=cfg.grid.abelian, scheme=cfg.grid.scheme)
        with doc.timed(family.name):
            doc.add_checks(family.name, selftest_model(model))
    return doc


# ------------ dump-fields


def cmd_dump_fields(cfg: RunConfig) -> ReportDocument:
    """Write the coefficients and invariants of the pair as CSV, and optionally the pair itself as a pair file.

    Raises
    ------
    ConfigError
        If neither a CSV path nor a pair-file path is configured.
    """
    if not (cfg.output.csv or cfg.output.pair_out):
        raise ConfigError("dump-fields needs --csv PATH and/or --pair-out PATH")

    doc = ReportDocument("dump-fields", config_echo(cfg))
    ctx, pair = load_pair(cfg)
    written = {}
    if cfg.output.csv:
        fields = {}
        for name, form in (("alpha_minus", pair.alpha_minus), ("alpha_plus", pair.alpha_plus)):
            fields.update({f"{name}.{c}": v for c, v in zip(("a0", "a_s", "a_u"), form.components)})
        fields["dvol.c"] = pair.dvol.c
        fields.update(pair_invariants(pair, cfg.tolerances.volume).items())
        write_fields_csv(cfg.output.csv, fields)
        written["csv"] = cfg.output.csv
    if cfg.output.pair_out:
        write_pair_file(cfg.output.pair_out, pair, cfg.model)
        written["pair_file"] = cfg.output.pair_out
    doc.add_section("written", written)
    return doc


COMMANDS = {
    "verify": cmd_verify,
    "homotopy": cmd_homotopy,
    "dynamics": cmd_dynamics,
    "selftest": cmd_selftest,
    "dump-fields": cmd_dump_fields,
}
