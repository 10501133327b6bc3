"""Command-line front end.

Subcommands ``spectrum``, ``coeffs``, ``density`` and ``verify`` write CSV
(default) or JSON to standard output or, atomically, to ``--output``.

Exit codes: 0 success, 1 usage, 2 domain error, 3 verification failure,
4 numerical-accuracy failure.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import dataclasses
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .cases import CASES
from .coeffs import closed_form_coeffs, solve_forward
from .density import density_csv, estimate_density, write_atomic
from .errors import AccuracyError, DomainError, TridiagError, UnsupportedCaseError
from .oracle import (QUAD_EPSABS, QUAD_EPSREL, RadialGrid, fd_bound_states, fd_window,
                     wave_operator_matrix)
from .spectra import closed_form_spectrum, numeric_spectrum
from .tridiag import FROZEN_READINGS, build_rep, potential_for

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY, EXIT_ACCURACY = 0, 1, 2, 3, 4

FD_TOL = 1e-6
TRIDIAG_TOL = 1e-8
ENTRY_TOL = 1e-7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def thread_count():
    """Worker cap from ``TRIDIAG_SPECTRA_THREADS`` (default 1)."""
    raw = os.environ.get("TRIDIAG_SPECTRA_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"TRIDIAG_SPECTRA_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"TRIDIAG_SPECTRA_THREADS must be a positive integer, got {raw!r}")
    return value


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _csv(header, rows, comments=()):
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _json(case_tag, params, results, extra_meta=None):
    meta = {"tool": "tridiag-spectra", "version": __version__,
            "tolerances": {"quad_abs": QUAD_EPSABS, "quad_rel": QUAD_EPSREL, "fd": FD_TOL,
                           "tridiagonal": TRIDIAG_TOL, "entries": ENTRY_TOL},
            "reading": FROZEN_READINGS.get(case_tag)}
    meta.update(extra_meta or {})
    doc = {"case": case_tag, "params": params, "results": results, "meta": meta}
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _emit(args, text):
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


# --- case construction ----------------------------------------------------------------

_FLAG_FOR = {"Z": "Z", "A": "A", "B": "B", "omega": "omega", "mu": "mu", "nu": "nu",
             "mu_hat": "mu_hat"}


def _case_from_args(args):
    cls = CASES[args.case]
    kwargs = {}
    for f in dataclasses.fields(cls):
        value = getattr(args, f.name, None)
        if value is None:
            if f.default is dataclasses.MISSING:
                raise UsageError(f"case {args.case} needs --{f.name.replace('_', '-')}")
            continue
        kwargs[f.name] = value
    case = cls(**kwargs)
    used = {f.name for f in dataclasses.fields(cls)}
    basis = {k: getattr(args, k) for k in ("nu", "mu")
             if k not in used and getattr(args, k, None) is not None}
    return case, basis


def _params(args, case):
    out = dict(case.params())
    for key in ("l", "lam", "E", "N", "n_max", "nu", "mu"):
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


def _add_case_flags(p, with_energy=True):
    p.add_argument("--case", required=True, choices=sorted(CASES))
    for flag in ("Z", "A", "B", "omega", "mu", "nu"):
        p.add_argument(f"--{flag}", type=float)
    p.add_argument("--mu-hat", dest="mu_hat", type=float)
    p.add_argument("--l", type=int, default=0, help="angular momentum")
    p.add_argument("--lambda", dest="lam", type=float, help="basis scale")
    if with_energy:
        p.add_argument("--E", type=float, help="energy")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output file (written atomically)")


# --- subcommands -----------------------------------------------------------------------

def cmd_spectrum(args):
    case, basis = _case_from_args(args)
    columns, rows, results = ["n"], [], {}
    closed = None
    if args.method in ("closed", "both"):
        closed = closed_form_spectrum(case, args.n_max, ell=args.l, lam=args.lam)
        results["closed_form"] = {"quantity": closed.quantity, "values": closed.values,
                                  "lam": closed.meta["lam"]}
        if "reason" in closed.meta:
            results["closed_form"]["reason"] = closed.meta["reason"]
            print(f"note: empty ladder: {closed.meta['reason']}", file=args.stderr)
    numeric = None
    if args.method in ("numeric", "both"):
        numeric = numeric_spectrum(case, args.N, ell=args.l, lam=args.lam, **basis)
        results["numeric"] = {"quantity": "E", "values": numeric.values[:args.n_max + 1],
                              "N": args.N}
    if args.format == "json":
        return _json(case.tag, _params(args, case), results)
    count = args.n_max + 1
    cols = []
    if closed is not None:
        columns.append(closed.quantity)
        cols.append(closed.values)
    if numeric is not None:
        columns.append("E_numeric")
        cols.append(numeric.values)
    for n in range(count):
        row = [n] + [c[n] if n < len(c) else None for c in cols]
        if all(v is None for v in row[1:]):
            break
        rows.append(row)
    return _csv(columns, rows)


def cmd_coeffs(args):
    case, basis = _case_from_args(args)
    rep = build_rep(case, args.N, ell=args.l, lam=args.lam, E=args.E, **basis)
    try:
        closed = closed_form_coeffs(rep).values
    except (UnsupportedCaseError, DomainError):
        closed = None
    f0 = closed[0] if closed is not None and closed[0] != 0 else 1.0
    fwd = solve_forward(rep, f0=f0)
    if args.format == "json":
        results = {"recursion": fwd.values, "closed_form": closed, "truncated": fwd.truncated,
                   "condition": dataclasses.asdict(fwd.condition) if fwd.condition else None}
        return _json(case.tag, _params(args, case), results, {"lam": rep.meta["lam"]})
    rows = []
    for n in range(len(fwd.values)):
        rows.append([n, fwd.values[n], closed[n] if closed is not None and n < len(closed) else None])
    return _csv(["n", "f_recursion", "f_closed_form"], rows)


def cmd_density(args):
    gammas = args.gamma
    workers = min(thread_count(), len(gammas))
    run = lambda g: estimate_density(args.mu, args.nu, g, args.N, form=args.case,
                                     bandwidth=args.bandwidth, points=args.points)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(run, gammas))
    else:
        estimates = [run(g) for g in gammas]
    if args.format == "json":
        results = [{"gamma": e.meta["gamma"], "nodes": e.nodes, "weights": e.weights,
                    "bandwidth": e.meta["bandwidth"], "y": e.y, "rho": e.rho} for e in estimates]
        params = {"mu": args.mu, "nu": args.nu, "gamma": gammas, "N": args.N}
        return _json(args.case, params, results, {"mass": "unit", "form": args.case})
    if len(estimates) == 1:
        return density_csv(estimates[0])
    if not args.output:
        raise UsageError("several --gamma values need --output (one file per gamma)")
    root, ext = os.path.splitext(args.output)
    for est in estimates:
        write_atomic(f"{root}_gamma{float(est.meta['gamma'])!r}{ext or '.csv'}", density_csv(est))
    return None


def _ground_state(case, args):
    try:
        return closed_form_spectrum(case, 0, ell=args.l, lam=args.lam)
    except TridiagError:
        return None


def _defaults(case, args):
    """Basis scale and energy for ``verify``: flags first, then the ground state."""
    ladder = _ground_state(case, args)
    lam, E = args.lam, args.E
    if lam is None:
        lam = 1.0
        if ladder is not None and len(ladder):
            lam = float(ladder.meta["lam"][0])
    if E is None and case.tag not in ("powerlaw1", "powerlaw2", "rosenmorse"):
        if ladder is None or not len(ladder) or ladder.quantity != "E":
            raise UsageError(f"case {case.tag} needs --E (no closed-form ground state to default to)")
        E = float(ladder.values[0])
    return lam, E


def _fd_levels(case, ell, lam, e_max, n_states, count):
    # refine the grid until the Richardson error estimate meets FD_TOL
    V = potential_for(case, lam)
    a, b = fd_window(V, ell, e_max, full_line=case.one_dimensional)
    last = None
    for c in (count, 2 * count, 4 * count):
        try:
            return fd_bound_states(V, ell, RadialGrid(a, b, c), n_states, tol=FD_TOL)
        except AccuracyError as exc:
            last = exc
    raise last


def cmd_verify(args):
    case, basis = _case_from_args(args)
    lam, E = _defaults(case, args)
    size = args.N
    rep = build_rep(case, size, ell=args.l, lam=lam, E=E, **basis)
    V = potential_for(case, rep.meta["lam"])
    mat, err = wave_operator_matrix(rep.basis, V, rep.energy, size)
    mat = mat * rep.scale
    ref = rep.matrix()
    norm = float(np.max(np.abs(ref))) or 1.0
    band = np.abs(np.subtract.outer(np.arange(size), np.arange(size))) >= 2
    tri_gap = float(np.max(np.abs(mat[band]))) / norm if band.any() else 0.0
    near = ~band
    entry_gap = float(np.max(np.abs(mat[near] - ref[near]))) / norm
    checks = [
        {"check": "tridiagonal", "value": tri_gap, "tol": TRIDIAG_TOL, "passed": tri_gap <= TRIDIAG_TOL},
        {"check": "entries", "value": entry_gap, "tol": ENTRY_TOL, "passed": entry_gap <= ENTRY_TOL},
    ]
    try:
        ladder = closed_form_spectrum(case, args.levels - 1, ell=args.l, lam=args.lam)
    except TridiagError:
        ladder = None
    if ladder is not None and ladder.quantity == "E" and len(ladder):
        ell = None if case.one_dimensional else args.l
        fd = _fd_levels(case, ell, ladder.meta["lam"][0], float(ladder.values.max()),
                        len(ladder), args.fd_count)
        gap = float(np.max(np.abs(fd.energies - ladder.values)))
        checks.append({"check": "spectrum_vs_fd", "value": gap, "tol": FD_TOL,
                       "passed": gap <= FD_TOL, "levels": ladder.values, "fd": fd.energies})
    passed = all(c["passed"] for c in checks)
    params = _params(args, case)
    params["E"] = rep.energy
    params["lam"] = rep.meta["lam"]
    if args.format == "json":
        text = _json(case.tag, params, {"passed": passed, "checks": checks})
    else:
        text = _csv(["check", "value", "tol", "passed"],
                    [[c["check"], c["value"], c["tol"], str(c["passed"]).lower()] for c in checks])
    return text, passed


def build_parser():
    parser = _Parser(prog="tridiag-spectra", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="closed-form and/or numeric ladders")
    _add_case_flags(p, with_energy=False)
    p.add_argument("--n-max", dest="n_max", type=int, default=5)
    p.add_argument("--method", choices=("closed", "numeric", "both"), default="closed")
    p.add_argument("--N", type=int, default=40, help="basis size for --method numeric")

    p = sub.add_parser("coeffs", help="expansion coefficients f_n(E)")
    _add_case_flags(p)
    p.add_argument("--N", type=int, default=31)

    p = sub.add_parser("density", help="density of the deformed Jacobi polynomials")
    p.add_argument("--case", required=True, choices=("hulthen2", "hulthen1"))
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--gamma", type=float, action="append", required=True)
    p.add_argument("--N", type=int, default=51)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")

    p = sub.add_parser("verify", help="oracle report for one case")
    _add_case_flags(p)
    p.add_argument("--N", type=int, default=13)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--fd-count", dest="fd_count", type=int, default=4000)
    return parser


def run(argv=None, stderr=None):
    """Run the CLI; returns the exit status."""
    stderr = sys.stderr if stderr is None else stderr
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        args.stderr = stderr
        thread_count()
        if args.command == "verify":
            text, passed = cmd_verify(args)
            _emit(args, text)
            return EXIT_OK if passed else EXIT_VERIFY
        handler = {"spectrum": cmd_spectrum, "coeffs": cmd_coeffs, "density": cmd_density}
        text = handler[args.command](args)
        if text is not None:
            _emit(args, text)
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=stderr)
        return EXIT_ACCURACY
    except (DomainError, UnsupportedCaseError) as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN


def main():
    try:
        status = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); not an error of ours
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        status = EXIT_OK
    sys.exit(status)


if __name__ == "__main__":
    main()
