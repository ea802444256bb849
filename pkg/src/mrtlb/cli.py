"""Command line entry point.

Exit codes: 0 success, 2 configuration error, 3 infeasible parameters,
4 unstable, 5 divergence during a run.
"""

import argparse
import contextlib
import dataclasses
import sys

import numpy as np

from . import bench, stability
from .errors import ConfigurationError, DivergenceDetected, InfeasibleParameters
from .config import load_config, output_path
from .lattice import WeightSet, expand_relaxation
from .params import default_omega_tilde, parameter_rows, parse_number, synthesize
from .solver import run, write_field_csv

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_UNSTABLE, EXIT_DIVERGED = 0, 2, 3, 4, 5

RATE_FIELDS = ("s0", "s_axis", "s2_diag_sq", "s2_cross", "s3", "s4")


class CommandFailed(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_rows(path, rows):
    with _open_out(path) as fh:
        fh.write("name,value\n")
        for name, value in rows:
            fh.write(f"{name},{_fmt(value)}\n")


def apply_overrides(model, overrides):
    if not overrides:
        return model
    rate_changes = {k: v for k, v in overrides.items() if k in RATE_FIELDS}
    if rate_changes:
        try:
            rates = model.rates.replace(**rate_changes)
            expand_relaxation(model.lattice, rates)
        except (TypeError, ConfigurationError) as exc:
            raise ConfigurationError(f"bad rate override: {exc}") from exc
        model = model.with_rates(rates)
    if "omega_axis" in overrides or "omega_diag" in overrides:
        w = model.weights
        weights = WeightSet(overrides.get("omega_axis", w.omega_axis), overrides.get("omega_diag", w.omega_diag))
        if weights.d != model.d:
            raise ConfigurationError("omega_axis override has the wrong length")
        model = model.with_weights(weights)
    return model


def build_model(cfg, pde=None, disc=None, check=True):
    pde = pde or cfg.pde()
    disc = disc or cfg.disc()
    model = synthesize(pde, disc, cfg.method, cfg.omega_tilde, cfg.s2_axis, cfg.branch, check=check)
    return apply_overrides(model, cfg.overrides)


def build_case(cfg):
    if cfg.case is None:
        raise ConfigurationError("[case] name is required for this command")
    if cfg.case == "gauss_hill":
        return bench.gauss_hill_case(cfg.d, cfg.kappa, cfg.gamma0)
    if cfg.d != 2:
        raise ConfigurationError("sine_source is two-dimensional")
    return bench.sine_source_case(*cfg.kappa)


def cmd_params(cfg, args):
    model = build_model(cfg)
    path = output_path(cfg, args.out, "params.csv")
    write_rows(path, parameter_rows(model))
    return EXIT_OK


def cmd_stability(cfg, args):
    model = build_model(cfg, check=False)
    path = output_path(cfg, args.out, "stability.csv")
    report = stability.check_structure(model)
    if not report.weights_ok:
        write_rows(path, report.rows())
        w0 = float(model.weights.omega0)
        raise CommandFailed(f"unstable: weights outside (0,1) (omega0={w0:.6g}); scan skipped", EXIT_UNSTABLE)
    scan = stability.von_neumann_scan(model, cfg.resolution, threads=args.threads)
    report = dataclasses.replace(report, vn_max_modulus=scan.vn_max_modulus,
                                 vn_simple_roots=scan.vn_simple_roots, scan_resolution=scan.scan_resolution)
    write_rows(path, report.rows())
    if not (report.structure_ok and report.scan_ok):
        raise CommandFailed(f"unstable: jw_asymmetry={report.jw_asymmetry:.3e}, "
                            f"jw_eigen_max={report.jw_eigen_max:.3e}, max|G|={report.vn_max_modulus:.12g}",
                            EXIT_UNSTABLE)
    return EXIT_OK


def _pair(region, key, default, cast=parse_number):
    value = region.get(key, default)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigurationError(f"region.{key} must have two entries")
    return tuple(cast(v) for v in value)


def cmd_region(cfg, args):
    region = cfg.region
    kind = region.get("kind", "stability")
    n = _pair(region, "n", [21, 21], int)
    if min(n) < 1:
        raise ConfigurationError("region.n entries must be positive")
    omega_tilde = parse_number(region["omega_tilde"]) if "omega_tilde" in region else cfg.omega_tilde
    if cfg.d < 2:
        raise ConfigurationError("region scans need d >= 2")
    if kind == "stability":
        raster = stability.stability_region(
            d=cfg.d, omega_tilde=default_omega_tilde(cfg.d) if omega_tilde is None else omega_tilde,
            x_range=_pair(region, "x_range", [0.0, 0.5]), y_range=_pair(region, "y_range", [0.0, 0.5]), n=n,
            s_axis=parse_number(region.get("s_axis", 1.2)), s2_axis=parse_number(region.get("s2_axis", 1.0)),
            s_cross=parse_number(region.get("s_cross", 1.1)),
            other_weights=[parse_number(v) for v in region["other_weights"]] if "other_weights" in region else None,
            resolution=int(region.get("resolution", 16)), threads=args.threads)
    elif kind == "solvability":
        raster = stability.solvability_region(
            d=cfg.d, omega_tilde=omega_tilde, s2_axis=cfg.s2_axis if cfg.s2_axis is not None else 1.0,
            eta=cfg.eta, dt=cfg.dt, x_range=_pair(region, "x_range", [0.01, 0.6]),
            y_range=_pair(region, "y_range", [0.01, 0.6]), n=n, threads=args.threads)
    else:
        raise ConfigurationError(f"unknown region kind {kind!r}")
    path = output_path(cfg, args.out, f"region_{kind}.csv")
    with _open_out(path) as fh:
        raster.write_csv(fh)
    return EXIT_OK


def cmd_run(cfg, args):
    case = build_case(cfg)
    if cfg.t_final is None:
        raise ConfigurationError("run.t_final is required")
    model = build_model(cfg, pde=case.pde)
    x = case.nodes(cfg.dx)
    state = bench.initial_state(case, model, x, cfg.init_scheme)
    try:
        result = run(state, model, t_final=cfg.t_final)
    except DivergenceDetected as exc:
        raise CommandFailed(f"diverged at step {exc.step}, cell {exc.cell}", EXIT_DIVERGED) from exc
    phi = result.phi
    path = output_path(cfg, args.out, "field.csv")
    with _open_out(path) as fh:
        write_field_csv(fh, phi)
    err = bench.l2_error(phi, case.analytic(x, result.time))
    print(f"steps={result.steps} t={result.time:.17g} l2_error={err:.6e}", file=sys.stderr)
    return EXIT_OK


def cmd_converge(cfg, args):
    case = build_case(cfg)
    if cfg.t_final is None or not cfg.dx_list:
        raise ConfigurationError("run.t_final and run.dx_list are required")

    def factory(pde, disc):
        return build_model(cfg, pde=pde, disc=disc, check=False)

    tables = {}
    for scheme in cfg.init_schemes:
        tables[scheme] = bench.convergence_study(case, factory, cfg.dx_list, cfg.scaling_ratio, cfg.t_final,
                                                 scheme, threads=args.threads)
    path = output_path(cfg, args.out, "convergence.csv")
    with _open_out(path) as fh:
        bench.write_convergence_csv(fh, tables)
    bad = [(s, r.dx) for s, rows in tables.items() for r in rows if r.diverged]
    if bad:
        raise CommandFailed(f"diverged runs (init, dx): {bad}", EXIT_DIVERGED)
    return EXIT_OK


COMMANDS = {"params": cmd_params, "stability": cmd_stability, "region": cmd_region, "run": cmd_run,
            "converge": cmd_converge}


def build_parser():
    parser = argparse.ArgumentParser(prog="mrtlb", description="Fourth-order MRT lattice Boltzmann toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", help="output CSV path ('-' for stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker thread cap")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleParameters as exc:
        msg = str(exc)
        print(msg if msg.startswith("infeasible") else f"infeasible: {msg}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CommandFailed as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
