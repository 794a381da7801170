"""Command-line interface: energy table, radial profiles, grids and checks.

All numbers are written with 9 significant digits in effective atomic units.
Exit codes: 0 success, 1 usage or check failure, 2 I/O failure.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import consistency, energies, fields, sources, wavefunction
from .numerics import QuadSpec, QuadratureError
from .wavefunction import TripletParams

__all__ = ["PROFILE_QUANTITIES", "COMMANDS", "UsageError", "build_parser", "main"]

COMMANDS = ("table1", "profile", "pair", "dm", "law", "selfcheck")
UNIT = "(a.u.)*"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x):
    return f"{float(x):.9g}"


def _field_values(fn):
    return lambda r, p, spec: np.asarray(fn(r, p), dtype=float)


def _hartree(r, p, spec):
    return np.array([fields.field_hartree(float(x), p, spec) for x in r])


def _xc(r, p, spec):
    return np.array([fields.field_xc(float(x), p, spec) for x in r])


def _currents(attr):
    return lambda r, p, spec: np.asarray(getattr(sources.current_components(r, p), attr), dtype=float)


PROFILE_QUANTITIES = {
    "rho": _field_values(sources.density),
    "r_rho": lambda r, p, spec: r * sources.density(r, p),
    "j": _currents("j_total"),
    "jp": _currents("j_p"),
    "jd": _currents("j_d"),
    "jm": _currents("j_m"),
    "e_ee": _field_values(fields.field_ee),
    "e_H": _hartree,
    "e_xc": _xc,
    "Z": _field_values(fields.kinetic_field),
    "D": _field_values(fields.differential_density_field),
    "L": _field_values(fields.lorentz_field),
    "Im": _field_values(fields.internal_magnetic_field),
    "M": _field_values(fields.m_field),
    "z_force": _field_values(fields.kinetic_force),
    "d_force": _field_values(fields.differential_density_force),
    "ell_force": lambda r, p, spec: sources.density(r, p) * fields.lorentz_field(r, p),
    "im_force": lambda r, p, spec: sources.density(r, p) * fields.internal_magnetic_field(r, p),
    "DplusZ": lambda r, p, spec: fields.differential_density_field(r, p) + fields.kinetic_field(r, p),
    "law_rhs": lambda r, p, spec: -consistency.internal_field(r, p),
}

# per-command defaults for r_max and samples
_DEFAULTS = {
    "table1": (10.0, 200),
    "profile": (10.0, 200),
    "pair": (8.0, 81),
    "dm": (6.0, 13),
    "law": (6.0, 60),
    "selfcheck": (6.0, 60),
}


def build_parser():
    ap = _Parser(prog="qdot-triplet", description="Triplet quantum-dot sources, fields and energies.")
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--quantity", default="rho", help="profile quantity or pair kind (g, xc)")
    ap.add_argument("--omega-l", type=float, default=0.1, help="Larmor frequency (a.u.)*")
    ap.add_argument("--r-max", type=float, default=None, help="outer radius (a.u.)*")
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--reference-r", type=float, default=0.0)
    ap.add_argument("--theta", type=float, default=0.0, help="degrees")
    ap.add_argument("--theta-prime", type=float, default=0.0, help="degrees")
    ap.add_argument("--out", default="-", help="output path, '-' for stdout")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--rel-tol", type=float, default=1e-10)
    ap.add_argument("--abs-tol", type=float, default=1e-12)
    ap.add_argument("--gnuplot", action="store_true", help="also write <out>.gp plotting the CSV")
    return ap


def _config(argv):
    args = build_parser().parse_args(argv)
    r_max, samples = _DEFAULTS[args.command]
    args.r_max = r_max if args.r_max is None else args.r_max
    args.samples = samples if args.samples is None else args.samples
    if not args.r_max > 0:
        raise UsageError("--r-max must be positive")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if args.omega_l < 0:
        raise UsageError("--omega-l must be non-negative")
    if args.reference_r < 0:
        raise UsageError("--reference-r must be non-negative")
    if args.command == "law" and args.r_max > consistency.LAW_GRID_RANGE[1]:
        raise UsageError(f"--r-max for law must not exceed {consistency.LAW_GRID_RANGE[1]}")
    if args.gnuplot and args.out == "-":
        raise UsageError("--gnuplot needs --out")
    try:
        args.spec = QuadSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    args.params = TripletParams.default().with_omega_L(args.omega_l)
    return args


def _workers():
    try:
        n = int(os.environ.get("QDOT_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return buf.getvalue()


def _json_text(doc):
    def clean(v):
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, (bool, str)) or v is None:
            return v
        return float(_fmt(v))
    return json.dumps(clean(doc), indent=2) + "\n"


def _uniform_grid(r_max, samples):
    return r_max * np.arange(1, samples + 1) / samples


def cmd_table1(cfg):
    closed = energies.closed_form_report(cfg.params, cfg.spec).to_dict()
    quad = energies.quadrature_report(cfg.params, cfg.spec).to_dict()
    ref = energies.REFERENCE_VALUES
    names = energies.EnergyReport.names()
    if cfg.format == "json":
        doc = {"closed_form": closed, "quadrature": quad, "reference": ref,
               "delta_closed": {k: abs(closed[k] - ref[k]) for k in names},
               "delta_quadrature": {k: abs(quad[k] - ref[k]) for k in names}}
        return _json_text(doc), 0
    header = ["quantity", f"reference {UNIT}", f"closed_form {UNIT}", f"quadrature {UNIT}",
              "abs_delta_closed", "abs_delta_quadrature", "abs_delta_routes"]
    rows = [[k, ref[k], closed[k], quad[k], abs(closed[k] - ref[k]), abs(quad[k] - ref[k]),
             abs(closed[k] - quad[k])] for k in names]
    return _csv_text(header, rows), 0


def cmd_profile(cfg):
    if cfg.quantity not in PROFILE_QUANTITIES:
        raise UsageError("unknown quantity; valid: " + ", ".join(PROFILE_QUANTITIES))
    r = _uniform_grid(cfg.r_max, cfg.samples)
    fn = PROFILE_QUANTITIES[cfg.quantity]
    n = _workers()
    if n > 1 and cfg.quantity in ("e_H", "e_xc"):
        with ThreadPoolExecutor(n) as ex:
            chunks = list(ex.map(lambda c: fn(c, cfg.params, cfg.spec), np.array_split(r, n)))
        value = np.concatenate(chunks)
    else:
        value = np.asarray(fn(r, cfg.params, cfg.spec), dtype=float)
    prof = sources.RadialProfile(cfg.quantity, cfg.omega_l, r, value)
    if cfg.format == "json":
        return _json_text({"quantity": prof.quantity, "omega_L": prof.omega_L,
                           "r": prof.r.tolist(), "value": prof.value.tolist(),
                           "est_error": prof.est_error.tolist()}), 0
    return _csv_text([f"r {UNIT}", f"{cfg.quantity} {UNIT}", "est_error"], prof.rows()), 0


def cmd_pair(cfg):
    kind = cfg.quantity if cfg.quantity in ("g", "xc") else "g"
    grids = [sources.pair_grid(cfg.reference_r, cfg.params, k, cfg.r_max, cfg.samples)
             for k in (("g", "xc") if cfg.quantity not in ("g", "xc") else (kind,))]
    if cfg.format == "json":
        return _json_text({g.kind: {"reference_r": cfg.reference_r, "x": g.x.tolist(),
                                    "y": g.y.tolist(), "values": g.values.tolist()}
                           for g in grids}), 0
    header = ["kind", f"x {UNIT}", f"y {UNIT}", f"value {UNIT}"]
    rows = [[g.kind, g.x[i], g.y[j], g.values[i, j]]
            for g in grids for i in range(g.x.size) for j in range(g.y.size)]
    return _csv_text(header, rows), 0


def cmd_dm(cfg):
    r = _uniform_grid(cfg.r_max, cfg.samples)
    n = _workers()
    theta, theta_p = math.radians(cfg.theta), math.radians(cfg.theta_prime)
    if n > 1:
        with ThreadPoolExecutor(n) as ex:
            grid = sources.density_matrix_grid(theta, theta_p, r, cfg.params, cfg.spec, executor=ex)
    else:
        grid = sources.density_matrix_grid(theta, theta_p, r, cfg.params, cfg.spec)
    if cfg.format == "json":
        return _json_text({"theta_deg": cfg.theta, "theta_prime_deg": cfg.theta_prime,
                           "r": grid.r.tolist(), "r_prime": grid.r_prime.tolist(),
                           "real": grid.values.real.tolist(), "imag": grid.values.imag.tolist()}), 0
    header = [f"r {UNIT}", f"r_prime {UNIT}", f"re_gamma {UNIT}", f"im_gamma {UNIT}"]
    rows = [[grid.r[i], grid.r_prime[j], grid.values[i, j].real, grid.values[i, j].imag]
            for i in range(grid.r.size) for j in range(grid.r_prime.size)]
    return _csv_text(header, rows), 0


def cmd_law(cfg, tol=1e-4):
    lo = consistency.LAW_GRID_RANGE[0]
    r = np.linspace(max(0.1, lo), cfg.r_max, cfg.samples) if cfg.r_max > 0.1 \
        else np.linspace(lo, cfg.r_max, cfg.samples)
    rep = consistency.law_report(r, cfg.params)
    status = 0 if rep.max_residual <= tol else 1
    if cfg.format == "json":
        doc = {"max_residual": rep.max_residual, "pass": status == 0,
               "points": [{"r": p.r, "lhs": p.lhs, "rhs": p.rhs, "residual": p.residual}
                          for p in rep.points]}
        return _json_text(doc), status
    header = [f"r {UNIT}", f"lhs {UNIT}", f"rhs {UNIT}", "residual"]
    rows = [[p.r, p.lhs, p.rhs, p.residual] for p in rep.points]
    return _csv_text(header, rows), status


def invariant_suite(params, spec=QuadSpec()):
    """Named (label, passed, value) checks across the modules, cheapest first."""
    checks = []
    checks.append(("norm", abs(wavefunction.norm_check(params, spec) - 1.0) <= 1e-6,
                   wavefunction.norm_check(params, spec)))
    a, b = wavefunction.PlanarPoint(1.3, 0.4), wavefunction.PlanarPoint(0.7, 2.1)
    anti = wavefunction.antisymmetry_residual(a, b, params)
    checks.append(("antisymmetry", anti <= 1e-9, anti))
    r = np.linspace(0.5, 4.0, 8)
    m_dev = float(np.max(np.abs(fields.m_field(r, params) + params.omega_L**2 * r)))
    checks.append(("magnetic_field_slope", m_dev <= 1e-10, m_dev))
    rho_dev = max(abs(sources.density(x, params) - sources.density_oracle(x, params, spec))
                  for x in (0.3, 2.0, 5.0))
    checks.append(("density_oracle", rho_dev <= 1e-8, rho_dev))
    total = energies.expectation_values(params)
    checks.append(("delta_equals_rho0", abs(total[3] - sources.density(0.0, params)) <= 1e-12,
                   total[3]))
    sr = abs(sources.pair_sum_rule(wavefunction.PlanarPoint(1.0, 0.0), params, "xc", spec) + 1.0)
    checks.append(("xc_sum_rule", sr <= 1e-5, sr))
    sc = consistency.self_consistency_check(params, spec)
    checks.append(("law_residual", sc.max_residual <= 1e-4, sc.max_residual))
    checks.append(("self_consistency", sc.passed, sc.omega0_sq_recovered))
    return checks, sc


def cmd_selfcheck(cfg):
    checks, sc = invariant_suite(cfg.params, cfg.spec)
    failed = [c[0] for c in checks if not c[1]]
    status = 0 if not failed else 1
    if cfg.format == "json":
        doc = sc.to_dict()
        doc["omega0_sq_expected"] = cfg.params.omega0_sq
        doc["checks"] = {name: {"pass": bool(ok), "value": val} for name, ok, val in checks}
        doc["pass"] = status == 0
        doc["first_failure"] = failed[0] if failed else None
        return _json_text(doc), status
    rows = [[name, "PASS" if ok else "FAIL", float(val)] for name, ok, val in checks]
    rows.append(["omega0_sq_expected", "", cfg.params.omega0_sq])
    rows.append(["k_fit", "", sc.k_fit])
    return _csv_text(["check", "status", f"value {UNIT}"], rows), status


_HANDLERS = {"table1": cmd_table1, "profile": cmd_profile, "pair": cmd_pair, "dm": cmd_dm,
             "law": cmd_law, "selfcheck": cmd_selfcheck}


def _gnuplot_script(cfg):
    if cfg.command == "profile":
        body = f"plot '{cfg.out}' using 1:2 with lines title '{cfg.quantity}'\n"
    elif cfg.command == "law":
        body = f"plot '{cfg.out}' using 1:2 with lines title 'lhs', '' using 1:3 with points title 'rhs'\n"
    elif cfg.command in ("pair", "dm"):
        body = f"splot '{cfg.out}' using 2:3:4 with points\n"
    else:
        body = f"plot '{cfg.out}' using 0:3 with linespoints\n"
    return "set datafile separator ','\nset key autotitle columnhead\n" + body


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def main(argv=None):
    try:
        cfg = _config(argv)
        text, status = _HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"qdot-triplet: usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, QuadratureError) as exc:
        print(f"qdot-triplet: {exc}", file=sys.stderr)
        return 1
    try:
        _write(cfg.out, text)
        if cfg.gnuplot:
            _write(cfg.out + ".gp", _gnuplot_script(cfg))
    except OSError as exc:
        target = exc.filename or cfg.out
        print(f"qdot-triplet: cannot write {target}: {exc.strerror}", file=sys.stderr)
        return 2
    if status and cfg.command == "selfcheck":
        print("qdot-triplet: selfcheck FAILED", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
