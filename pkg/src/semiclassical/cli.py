"""Command-line front end.

    semiclassical catalog
    semiclassical spectrum --potential poschl-teller --param V0=1 --param alpha=1 --beta 0.1 --order full
    semiclassical compare  --potential gaussian-well --param V0=5 --param w=1 --beta 0.1 \
                           --order order0 --order adiabatic --reference oracle
    semiclassical scan-delta1 --potential poschl-teller --param V0=1 --param alpha=1 --beta 0.1 --points 20
    semiclassical oracle --potential morse --param D=1 --param alpha=1 --beta 0.1 --m 5

Exit status: 0 on success, 2 on invalid input, 3 when anything failed to converge.
"""

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import asdict

import numpy as np

from .action import QuadratureConfig, QuadratureWarning, action_shifted
from .corrections import delta1_from_action, resum_delta
from .oracle import GridConfig, eigenvalues_fd
from .potentials import (
    CATALOG_KINDS,
    EXACT_KINDS,
    REQUIRED_PARAMS,
    make_catalog_potential,
    normalize_kind,
    read_tabulated_csv,
    well_frame,
)
from .solver import NON_CONVERGENCE_FLAGS, ORDERS, SolverConfig, SolverError, compare, solve_spectrum

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCONVERGED = 3

SPREAD_TOL = 1e-6
SPREAD_LABEL = "1e-6"


class InvalidRequest(ValueError):
    pass


def fmt(value):
    """12 significant digits; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _round(value):
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.12g}")
    if isinstance(value, float):
        return str(value)  # JSON has no inf/nan
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    return value


def _parse_params(items):
    params = {}
    for item in items or ():
        name, sep, raw = item.partition("=")
        if not sep or not name.strip():
            raise InvalidRequest(f"--param expects NAME=VALUE, got {item!r}")
        try:
            params[name.strip()] = float(raw)
        except ValueError:
            raise InvalidRequest(f"parameter {name!r} is not a number: {raw!r}") from None
    return params


def build_potential(args):
    kind = normalize_kind(args.potential)
    if kind == "tabulated":
        if not args.file:
            raise InvalidRequest("--potential tabulated needs --file")
        try:
            pot = read_tabulated_csv(args.file)
        except OSError as exc:
            raise InvalidRequest(f"cannot read {args.file}: {exc.strerror}") from None
        params = _parse_params(args.param)
        if set(params) - {"shift"}:
            raise InvalidRequest("tabulated potentials accept only the 'shift' parameter")
        return pot.shifted_by(params["shift"]) if "shift" in params else pot
    return make_catalog_potential(kind, _parse_params(args.param))


def _quad(args):
    return QuadratureConfig(rel_tol=args.rel_tol, max_doublings=args.max_doublings)


def _grid(args):
    bounds = tuple(args.bounds) if args.bounds else None
    return GridConfig(half_width=args.half_width, n_points=args.n_points,
                      richardson=not args.no_richardson, bounds=bounds)


def _request(args):
    out = {"command": args.command}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "func") or value is None:
            continue
        out[key] = value
    return out


def _csv_text(header, rows, trailer=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    for line in trailer:
        buf.write(line + "\n")
    return buf.getvalue()


def _json_text(args, levels, diagnostics):
    doc = {"request": _request(args), "levels": _round(levels), "diagnostics": _round(diagnostics)}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _flags(flags):
    return ";".join(flags)


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args):
    rows = []
    for kind in CATALOG_KINDS:
        pot = make_catalog_potential(kind, {p: 1.0 for p in REQUIRED_PARAMS[kind]})
        rows.append({
            "kind": kind,
            "params": list(REQUIRED_PARAMS[kind]),
            "class_five": pot.class_five is not None,
            "exact_spectrum": kind in EXACT_KINDS,
        })
    if args.format == "json":
        return _json_text(args, rows, {"count": len(rows)}), EXIT_OK
    text = _csv_text(["kind", "params", "class_five", "exact_spectrum"],
                     [[r["kind"], ";".join(r["params"]), r["class_five"], r["exact_spectrum"]] for r in rows])
    return text, EXIT_OK


def cmd_spectrum(args):
    pot = build_potential(args)
    order = (args.order or ["full"])[-1]
    config = SolverConfig(root_tol=args.root_tol)
    levels = solve_spectrum(pot, args.beta, order, args.n_max, config, _quad(args))
    status = EXIT_OK if all(lv.converged for lv in levels) else EXIT_UNCONVERGED
    if args.format == "json":
        diag = {"n_levels": len(levels), "converged": status == EXIT_OK,
                "adiabatic_warning": any("adiabatic_warning" in lv.flags for lv in levels)}
        return _json_text(args, [asdict(lv) for lv in levels], diag), status
    header = ["n", "order", "energy", "delta1", "delta", "d_delta_dn", "residual", "iterations", "flags"]
    rows = [[lv.n, lv.order, lv.energy, lv.delta1, lv.delta_used, lv.d_delta_dn, lv.residual,
             lv.iterations, _flags(lv.flags)] for lv in levels]
    return _csv_text(header, rows), status


def cmd_compare(args):
    pot = build_potential(args)
    orders = args.order or ["order0", "full"]
    if args.reference == "analytic" and pot.kind not in EXACT_KINDS:
        raise InvalidRequest(f"no analytic reference for {pot.kind}; use --reference oracle")
    rows = compare(pot, args.beta, orders, args.reference, args.n_max,
                   SolverConfig(root_tol=args.root_tol), _quad(args), _grid(args))
    bad = any(NON_CONVERGENCE_FLAGS.intersection(r.flags) for r in rows)
    status = EXIT_UNCONVERGED if bad else EXIT_OK
    if args.format == "json":
        levels = [asdict(r) for r in rows]
        return _json_text(args, levels, {"n_levels": len(rows), "orders": orders,
                                         "reference": args.reference}), status
    header = (["n"] + [f"energy_{o}" for o in orders] + ["reference"]
              + [f"abs_err_{o}" for o in orders] + [f"rel_err_{o}" for o in orders]
              + ["delta1", "delta", "d_delta_dn", "flags"])
    table = []
    for r in rows:
        table.append([r.n] + [r.energies[o] for o in orders] + [r.reference]
                     + [r.abs_err[o] for o in orders] + [r.rel_err[o] for o in orders]
                     + [r.delta1, r.delta, r.d_delta_dn, _flags(r.flags)])
    return _csv_text(header, table), status


def cmd_scan_delta1(args):
    pot = build_potential(args)
    frame = well_frame(pot)
    if not frame.parabolic:
        raise InvalidRequest("the well bottom is not parabolic (k <= 0); the action route is unavailable")
    if args.points < 2:
        raise InvalidRequest("--points must be at least 2")
    if math.isfinite(pot.depth):
        scale = pot.depth
    elif args.e_max is not None:
        scale = args.e_max
    else:
        raise InvalidRequest("confining well: give the energy range with --e-max")
    quad = _quad(args)
    energies = scale * np.linspace(args.lo_frac, args.hi_frac, args.points)
    unconverged = False
    rows = []
    for eps in energies:
        res = action_shifted(pot, args.beta, float(eps), quad)
        unconverged |= not res.converged
        est = delta1_from_action(lambda _e, v=res.value: v, args.beta, frame.k, float(eps))
        rows.append({"eps_tilde": float(eps), "energy": float(eps) + pot.V_min, "phi": res.value,
                     "delta1": est.delta1, "delta": resum_delta(est.delta1)})
    d1 = [r["delta1"] for r in rows]
    spread = max(d1) - min(d1)
    verdict = f"spread<={SPREAD_LABEL}" if spread <= SPREAD_TOL else f"spread>{SPREAD_LABEL}"
    status = EXIT_UNCONVERGED if unconverged else EXIT_OK
    if args.format == "json":
        return _json_text(args, rows, {"spread": spread, "summary": verdict}), status
    header = ["eps_tilde", "energy", "phi", "delta1", "delta"]
    table = [[r[h] for h in header] for r in rows]
    return _csv_text(header, table, [f"# spread={fmt(spread)} {verdict}"]), status


def cmd_oracle(args):
    pot = build_potential(args)
    res = eigenvalues_fd(pot, args.beta, _grid(args), args.m)
    fine = res.fine if res.fine is not None else [None] * len(res.energies)
    rows = [{"n": i, "energy": float(e), "coarse": float(c), "fine": None if f is None else float(f)}
            for i, (e, c, f) in enumerate(zip(res.energies, res.coarse, fine))]
    if args.format == "json":
        return _json_text(args, rows, {"bounds": list(res.bounds), "flags": list(res.flags)}), EXIT_OK
    table = [[r["n"], r["energy"], r["coarse"], r["fine"], _flags(res.flags)] for r in rows]
    return _csv_text(["n", "energy", "coarse", "fine", "flags"], table), EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_potential(p):
    p.add_argument("--potential", required=True,
                   help="one of: " + ", ".join(k.replace("_", "-") for k in CATALOG_KINDS) + ", tabulated")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="potential parameter (repeatable)")
    p.add_argument("--file", help="two-column x,V CSV for --potential tabulated")
    p.add_argument("--beta", type=float, required=True, help="beta = hbar / sqrt(2m)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--rel-tol", type=float, default=1e-10, help="quadrature relative tolerance")
    p.add_argument("--max-doublings", type=int, default=16)


def _add_solver(p, multi):
    help_ = "solver order (repeatable)" if multi else "solver order"
    p.add_argument("--order", action="append", choices=ORDERS, help=help_)
    p.add_argument("--n-max", type=int)
    p.add_argument("--root-tol", type=float, default=1e-12)


def _add_grid(p):
    p.add_argument("--n-points", type=int, default=4000)
    p.add_argument("--half-width", type=float)
    p.add_argument("--bounds", type=float, nargs=2, metavar=("X_LO", "X_HI"))
    p.add_argument("--no-richardson", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="semiclassical", description="Improved semiclassical bound-state spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the built-in potentials")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("spectrum", help="solve the quantization condition")
    _add_potential(p)
    _add_solver(p, multi=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="compare orders against a reference spectrum")
    _add_potential(p)
    _add_solver(p, multi=True)
    p.add_argument("--reference", choices=("analytic", "oracle"), default="analytic")
    _add_grid(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scan-delta1", help="delta1 from the action across the well")
    _add_potential(p)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--lo-frac", type=float, default=0.1)
    p.add_argument("--hi-frac", type=float, default=0.9)
    p.add_argument("--e-max", type=float, help="energy scale above the bottom for confining wells")
    p.set_defaults(func=cmd_scan_delta1)

    p = sub.add_parser("oracle", help="finite-difference reference eigenvalues")
    _add_potential(p)
    p.add_argument("--m", type=int, default=1, help="number of eigenvalues")
    _add_grid(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, execute, write the report; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", QuadratureWarning)
            text, status = args.func(args)
    except QuadratureWarning as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_UNCONVERGED
    except SolverError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_UNCONVERGED
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    stdout.write(text)
    if status == EXIT_UNCONVERGED:
        stderr.write("error: some results did not converge; see the flags column\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
