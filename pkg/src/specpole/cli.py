"""Command-line entry point for the pole-spectrum toolkit.

One executable with six subcommands:

    constants    print a built-in filter's effective band limit and moments
    spectrum     tabulate the spectral density (and optionally covariances)
    simulate     draw a moving-average path and write it as CSV
    transform    filter a path into a per-scale coefficient panel
    estimate     turn a panel CSV into pole/exponent estimates
    montecarlo   run a replication experiment and aggregate MSE tables

Exit codes: 0 on success, 1 on domain errors (invalid parameter ranges,
unknown filter names, quadrature failures), 2 on usage errors (bad
flags, missing or malformed config files, schema violations).  Schema
problems are reported with the JSON-pointer path of the offending key,
so ``"config error at /schedule/j_max: missing required key"`` points
into the document.

Every command that writes files also writes ``manifest.json`` next to
them, capturing the artifact version, the fully resolved configuration
(with flag overrides applied) and the seed, so any output can be
reproduced exactly from its manifest alone.
"""

import argparse
import dataclasses
import json
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .estimator import estimate, results_to_csv
from .mc import (
    experiment_from_json,
    experiment_to_json,
    run_experiment,
    summarize,
)
from .model import (
    GegenbauerSpec,
    SpectralModel,
    builtin_filter,
    covariance_eval,
    density_eval,
    filter_from_json,
    filter_to_json,
    model_from_json,
    model_to_json,
)
from .simulate import (
    PROVENANCES,
    gegenbauer_path,
    panel_from_csv,
    panel_to_csv,
    path_from_csv,
    path_to_csv,
)
from .specfun import QuadratureSpec, gegenbauer_coeffs
from .transform import (
    TransformRequest,
    lattice_window,
    panel_from_path,
    schedule_from_json,
    schedule_to_json,
)

__all__ = ["ConfigError", "build_parser", "main"]


class ConfigError(Exception):
    """A config document violates the schema at a specific location.

    ``pointer`` is the JSON-pointer path of the offending key ("" for
    problems with the document as a whole).
    """

    def __init__(self, pointer, message):
        super().__init__("%s: %s" % (pointer or "config", message))
        self.pointer = pointer
        self.message = message


# ---------------------------------------------------------------------------
# Config loading and schema checks
# ---------------------------------------------------------------------------


_KINDS = {
    "object": (dict, "an object"),
    "string": (str, "a string"),
    "number": ((int, float), "a number"),
    "integer": (int, "an integer"),
}


def _field(doc, pointer, key, kind, required=True, default=None):
    """Fetch doc[key], checking its JSON type and reporting by pointer."""
    here = "%s/%s" % (pointer, key)
    if key not in doc:
        if required:
            raise ConfigError(here, "missing required key")
        return default
    value = doc[key]
    pytype, label = _KINDS[kind]
    if isinstance(value, bool) or not isinstance(value, pytype):
        raise ConfigError(
            here, "expected %s, got %s" % (label, type(value).__name__)
        )
    return value


def _load_config(path_str):
    if path_str is None:
        raise ConfigError("", "a config file is required (pass --config)")
    try:
        with open(path_str, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ConfigError("", "config file %r does not exist" % path_str)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", "config is not valid JSON (%s)" % exc)
    if not isinstance(doc, dict):
        raise ConfigError("", "config root must be an object")
    return doc


def _validated_model(doc, pointer):
    family = _field(doc, pointer, "family", "string")
    if family == "indicator":
        for key in ("s0", "alpha", "M"):
            _field(doc, pointer, key, "number")
    elif family == "gegenbauer":
        for key in ("d", "u"):
            _field(doc, pointer, key, "number")
        _field(doc, pointer, "sigma_eps", "number", required=False)
        _field(doc, pointer, "truncation", "integer", required=False)
    else:
        raise ConfigError(
            pointer + "/family",
            "unknown model family %r (expected 'indicator' or 'gegenbauer')"
            % family,
        )
    return model_from_json(doc)


def _validated_filter(doc, pointer):
    _field(doc, pointer, "name", "string")
    _field(doc, pointer, "sigma", "number", required=False)
    return filter_from_json(doc)


def _validated_schedule(doc, pointer):
    rule = _field(doc, pointer, "rule", "string")
    if rule == "linear":
        _field(doc, pointer, "j_max", "integer")
        _field(doc, pointer, "kappa", "number", required=False)
    elif rule == "geometric":
        _field(doc, pointer, "j_max", "integer")
        for key in ("a0", "rho", "kappa"):
            _field(doc, pointer, key, "number")
        _field(doc, pointer, "m_cap", "integer", required=False)
    else:
        raise ConfigError(
            pointer + "/rule",
            "unknown rule %r (expected 'linear' or 'geometric')" % rule,
        )
    return schedule_from_json(doc)


# ---------------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------------


def _write_manifest(out_dir, command, config_doc, seed, outputs):
    doc = {
        "artifact_version": __version__,
        "command": command,
        "config": config_doc,
        "seed": seed,
        "outputs": sorted(outputs),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _ensure_out(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _save_csv(path, arr, header):
    np.savetxt(path, arr, fmt="%.17g", delimiter=",", header=header, comments="")


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def cmd_constants(args):
    filt = builtin_filter(args.filter, sigma=args.sigma)
    doc = {
        "name": filt.name,
        "A_effective": filt.band_limit_A,
        "c2": filt.c2,
        "c3": filt.c3,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


def _transfer_density(spec, lam):
    """Density of the truncated moving average at the given frequencies."""
    coeffs = gegenbauer_coeffs(spec.truncation - 1, spec.d, spec.u)
    phases = np.exp(-1j * np.outer(np.asarray(lam, dtype=float), np.arange(coeffs.size)))
    transfer = phases @ coeffs
    return spec.sigma_eps**2 * np.abs(transfer) ** 2 / (2.0 * np.pi)


def _ma_covariances(spec, lags):
    coeffs = gegenbauer_coeffs(spec.truncation - 1, spec.d, spec.u)
    full = spec.sigma_eps**2 * np.correlate(coeffs, coeffs, "full")
    center = coeffs.size - 1
    out = np.zeros(len(lags))
    for i, h in enumerate(lags):
        h = abs(int(h))
        if h <= center:
            out[i] = full[center + h]
    return out


def _spectrum_model(args):
    """Resolve the model and grid from --config or inline flags."""
    if args.config is not None and args.family is not None:
        raise ConfigError("", "pass either --config or --family, not both")
    lam_max, n_grid, cov_lags = args.lam_max, args.n_grid, args.cov_lags
    if args.config is not None:
        doc = _load_config(args.config)
        model = _validated_model(_field(doc, "", "model", "object"), "/model")
        if lam_max is None:
            lam_max = _field(doc, "", "lam_max", "number", required=False)
        if n_grid is None:
            n_grid = _field(doc, "", "n_grid", "integer", required=False)
        if cov_lags is None:
            cov_lags = _field(doc, "", "cov_lags", "integer", required=False)
    elif args.family == "indicator":
        if args.s0 is None or args.alpha is None or args.M is None:
            raise ConfigError(
                "", "--family indicator needs --s0, --alpha and --M"
            )
        model = model_from_json(
            {"family": "indicator", "s0": args.s0, "alpha": args.alpha, "M": args.M}
        )
    elif args.family == "gegenbauer":
        if args.d is None or args.u is None:
            raise ConfigError("", "--family gegenbauer needs --d and --u")
        doc = {"family": "gegenbauer", "d": args.d, "u": args.u}
        if args.sigma_eps is not None:
            doc["sigma_eps"] = args.sigma_eps
        if args.truncation is not None:
            doc["truncation"] = args.truncation
        model = model_from_json(doc)
    else:
        raise ConfigError("", "spectrum needs --config or --family")
    if lam_max is None:
        lam_max = 1.5 * model.envelope if isinstance(model, SpectralModel) else math.pi
    if n_grid is None:
        n_grid = 401
    if cov_lags is None:
        cov_lags = 0
    return model, float(lam_max), int(n_grid), int(cov_lags)


def cmd_spectrum(args):
    model, lam_max, n_grid, cov_lags = _spectrum_model(args)
    if not (lam_max > 0.0 and math.isfinite(lam_max)):
        raise ValueError("spectrum: lam-max must be a positive real")
    if n_grid < 2:
        raise ValueError("spectrum: n-grid must be at least 2")
    if cov_lags < 0:
        raise ValueError("spectrum: cov-lags must be non-negative")
    lam = np.linspace(-lam_max, lam_max, n_grid)
    if isinstance(model, SpectralModel):
        if np.any(np.abs(np.abs(lam) - model.s0) == 0.0):
            warnings.warn(
                "spectrum: grid hits the singular frequencies at +-%g; "
                "shifting every point by half a grid step" % model.s0
            )
            lam = lam + 0.5 * (lam[1] - lam[0])
        f = density_eval(model, lam)
    else:
        f = _transfer_density(model, lam)
    spectrum_rows = np.column_stack([lam, f])

    cov_rows = None
    if cov_lags > 0:
        lags = np.arange(cov_lags + 1, dtype=float)
        if isinstance(model, SpectralModel):
            # Plot-data tolerance; the default spec can stall in roundoff
            # at the pole panel long before 1e-8 matters for a table.
            spec = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-8)
            bvals = np.array([covariance_eval(model, r, spec) for r in lags])
        else:
            bvals = _ma_covariances(model, lags)
        cov_rows = np.column_stack([lags, bvals])

    resolved = {
        "model": model_to_json(model),
        "lam_max": lam_max,
        "n_grid": n_grid,
        "cov_lags": cov_lags,
    }
    if args.out is None:
        _save_csv(sys.stdout, spectrum_rows, "lam,f")
        if cov_rows is not None:
            _save_csv(sys.stdout, cov_rows, "r,B")
        return 0
    out_dir = _ensure_out(args.out)
    outputs = ["spectrum.csv"]
    _save_csv(os.path.join(out_dir, "spectrum.csv"), spectrum_rows, "lam,f")
    if cov_rows is not None:
        outputs.append("covariance.csv")
        _save_csv(os.path.join(out_dir, "covariance.csv"), cov_rows, "r,B")
    _write_manifest(out_dir, "spectrum", resolved, None, outputs)
    print("wrote %s to %s" % (", ".join(sorted(outputs)), out_dir))
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _require_ma_model(model, command):
    if not isinstance(model, GegenbauerSpec):
        raise TypeError(
            "%s: a closed-form density carries no sampling recipe; "
            "only the moving-average model can generate paths" % command
        )


def cmd_simulate(args):
    doc = _load_config(args.config)
    model = _validated_model(_field(doc, "", "model", "object"), "/model")
    n_points = _field(doc, "", "n_points", "integer")
    t0 = float(_field(doc, "", "t0", "number", required=False, default=0.0))
    dt = float(_field(doc, "", "dt", "number", required=False, default=1.0))
    seed = _field(doc, "", "seed", "integer")
    if args.seed is not None:
        seed = args.seed
    _require_ma_model(model, "simulate")
    path = gegenbauer_path(model, n_points, t0, dt, seed)
    out_dir = _ensure_out(args.out)
    path_to_csv(path, os.path.join(out_dir, "path.csv"))
    resolved = {
        "model": model_to_json(model),
        "n_points": n_points,
        "t0": t0,
        "dt": dt,
        "seed": seed,
    }
    _write_manifest(out_dir, "simulate", resolved, seed, ["path.csv"])
    print("wrote path.csv (%d samples) to %s" % (n_points, out_dir))
    return 0


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def cmd_transform(args):
    doc = _load_config(args.config)
    filt = _validated_filter(_field(doc, "", "filter", "object"), "/filter")
    schedule = _validated_schedule(
        _field(doc, "", "schedule", "object"), "/schedule"
    )
    resolved = {
        "filter": filter_to_json(filt),
        "schedule": schedule_to_json(schedule),
    }
    if "path_csv" in doc:
        src = _field(doc, "", "path_csv", "string")
        seed = _field(doc, "", "seed", "integer", required=False, default=0)
        if args.seed is not None:
            seed = args.seed
        path = path_from_csv(src, seed)
        resolved["path_csv"] = src
    else:
        model = _validated_model(_field(doc, "", "model", "object"), "/model")
        _require_ma_model(model, "transform")
        seed = _field(doc, "", "seed", "integer")
        if args.seed is not None:
            seed = args.seed
        t_lo, t_hi = lattice_window(filt, schedule)
        path = gegenbauer_path(model, t_hi - t_lo + 1, float(t_lo), 1.0, seed)
        resolved["model"] = model_to_json(model)
    resolved["seed"] = seed
    panel = panel_from_path(
        TransformRequest(path=path, filter=filt, schedule=schedule)
    )
    out_dir = _ensure_out(args.out)
    panel_to_csv(panel, os.path.join(out_dir, "panel.csv"))
    _write_manifest(out_dir, "transform", resolved, seed, ["panel.csv"])
    print(
        "wrote panel.csv (%d levels) to %s" % (len(panel.levels), out_dir)
    )
    return 0


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def cmd_estimate(args):
    if args.config is not None:
        doc = _load_config(args.config)
        panel_csv = _field(doc, "", "panel_csv", "string")
        filt = _validated_filter(_field(doc, "", "filter", "object"), "/filter")
        provenance = _field(
            doc, "", "provenance", "string",
            required=False, default="path-transform",
        )
        if provenance not in PROVENANCES:
            raise ConfigError(
                "/provenance", "must be one of %s" % (sorted(PROVENANCES),)
            )
        seed = _field(doc, "", "seed", "integer", required=False, default=0)
    else:
        if args.panel is None or args.filter is None:
            raise ConfigError(
                "", "estimate needs --config, or --panel together with --filter"
            )
        panel_csv = args.panel
        filt = builtin_filter(args.filter, sigma=args.sigma)
        provenance = "path-transform"
        seed = 0
    panel = panel_from_csv(panel_csv, provenance, seed)
    results = estimate(panel, filt)
    out_dir = _ensure_out(args.out)
    results_to_csv(results, os.path.join(out_dir, "estimates.csv"))
    resolved = {
        "panel_csv": panel_csv,
        "filter": filter_to_json(filt),
        "provenance": provenance,
        "seed": seed,
    }
    _write_manifest(out_dir, "estimate", resolved, seed, ["estimates.csv"])
    for res in results:
        print(
            "level %d (a=%g): s0_hat=%.6f alpha_hat=%.6f (adjustment %s)"
            % (res.j, res.row.a_j, res.s0_hat, res.alpha_hat,
               res.point.case_applied)
        )
    return 0


# ---------------------------------------------------------------------------
# montecarlo
# ---------------------------------------------------------------------------


def cmd_montecarlo(args):
    doc = _load_config(args.config)
    _validated_model(_field(doc, "", "model", "object"), "/model")
    _validated_filter(_field(doc, "", "filter", "object"), "/filter")
    _validated_schedule(_field(doc, "", "schedule", "object"), "/schedule")
    backend = _field(doc, "", "backend", "string")
    if backend not in PROVENANCES:
        raise ConfigError(
            "/backend", "must be one of %s" % (sorted(PROVENANCES),)
        )
    _field(doc, "", "replications", "integer")
    _field(doc, "", "base_seed", "integer")
    _field(doc, "", "out_dir", "string", required=False)
    _field(doc, "", "workers", "integer", required=False)
    config = experiment_from_json(doc)
    updates = {}
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    out_dir = args.out if args.out is not None else config.out_dir
    if out_dir is None:
        raise ConfigError(
            "", "an output directory is required (set out_dir or pass --out)"
        )
    updates["out_dir"] = _ensure_out(out_dir)
    config = dataclasses.replace(config, **updates)
    table = run_experiment(config)
    _write_manifest(
        out_dir,
        "montecarlo",
        experiment_to_json(config),
        config.base_seed,
        ["replications.csv", "mse_table.csv", "summary.json"],
    )
    print(summarize(table))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="specpole",
        description="Simulate, transform and estimate processes whose "
        "spectral density blows up at a non-zero frequency.",
    )
    parser.add_argument(
        "--version", action="version", version="specpole " + __version__
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "constants",
        help="print a filter's effective band limit and moment constants",
    )
    p.add_argument("--filter", required=True,
                   help="built-in filter name (e.g. shannon-father)")
    p.add_argument("--sigma", type=float, default=1.0,
                   help="width parameter for the mexican-hat filter")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser(
        "spectrum",
        help="tabulate the spectral density and optional covariances as CSV",
    )
    p.add_argument("--config", help="JSON config with a 'model' object")
    p.add_argument("--out", help="output directory (default: CSV on stdout)")
    p.add_argument("--family", choices=("indicator", "gegenbauer"),
                   help="inline model family instead of --config")
    p.add_argument("--s0", type=float, help="pole location (indicator model)")
    p.add_argument("--alpha", type=float,
                   help="memory exponent (indicator model)")
    p.add_argument("--M", type=float,
                   help="band edge of the indicator envelope")
    p.add_argument("--d", type=float,
                   help="memory parameter (gegenbauer model)")
    p.add_argument("--u", type=float,
                   help="cosine of the singular frequency (gegenbauer model)")
    p.add_argument("--sigma-eps", type=float,
                   help="innovation standard deviation (gegenbauer model)")
    p.add_argument("--truncation", type=int,
                   help="number of moving-average terms (gegenbauer model)")
    p.add_argument("--lam-max", type=float,
                   help="grid half-width (default: past the band edge)")
    p.add_argument("--n-grid", type=int,
                   help="number of frequency grid points (default 401)")
    p.add_argument("--cov-lags", type=int,
                   help="also tabulate covariances at lags 0..N (default 0)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser(
        "simulate", help="draw a moving-average path and write path.csv"
    )
    p.add_argument("--config", required=True,
                   help="JSON config with model, n_points, t0, dt, seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "transform",
        help="filter a path into a coefficient panel and write panel.csv",
    )
    p.add_argument("--config", required=True,
                   help="JSON config with filter, schedule and a model+seed "
                        "or a path_csv to read")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser(
        "estimate",
        help="estimate the pole and exponent from a panel CSV",
    )
    p.add_argument("--config",
                   help="JSON config with panel_csv and filter")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--panel", help="panel CSV path (alternative to --config)")
    p.add_argument("--filter", help="filter name used to build the panel")
    p.add_argument("--sigma", type=float, default=1.0,
                   help="width parameter for the mexican-hat filter")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser(
        "montecarlo",
        help="run a replication experiment and write MSE tables",
    )
    p.add_argument("--config", required=True,
                   help="JSON experiment config (model, filter, schedule, "
                        "backend, replications, base_seed)")
    p.add_argument("--out", help="output directory (overrides config out_dir)")
    p.add_argument("--seed", type=int, help="override the config base_seed")
    p.add_argument("--workers", type=int,
                   help="worker threads (default: available parallelism)")
    p.set_defaults(func=cmd_montecarlo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        if exc.pointer:
            print("config error at %s: %s" % (exc.pointer, exc.message),
                  file=sys.stderr)
        else:
            print("config error: %s" % exc.message, file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, ArithmeticError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
