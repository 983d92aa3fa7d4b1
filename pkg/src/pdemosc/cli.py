"""Command-line front-end.

Subcommands: spectrum, eigenfunctions, polynomials, verify, compare-ordering.
All numbers are serialized with 17 significant digits so doubles round-trip
exactly and repeated runs are byte-identical.  Exit codes: 0 success,
1 computation error, 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .discrete import (
    assemble_sturm_liouville,
    assemble_von_roos,
    build_grid,
    eigen_tridiagonal,
    von_roos_asymmetry,
)
from .errors import PdemError
from .families import (
    Kind,
    VonRoosOrdering,
    bound_state_count,
    energy,
    make_family,
)
from .polynomials import (
    eigenfunction_samples,
    gf_polynomial,
    parameterization_for,
    to_json_dict,
)
from .susy import report_to_json_dict, verify_all

_KINDS = {
    "case1": Kind.CASE1,
    "case2": Kind.CASE2,
    "case3": Kind.CASE3,
    "constant": Kind.CONSTANT,
}

_Q_MEANING = {
    "case1": "q = lambda/alpha",
    "case2": "q = 1/(alpha*lambda)",
    "case3": "q = lambda^2/(2*alpha)",
}


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_text(value) -> str:
    """json.dumps with floats pinned to 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_json_text(v)}"
                          for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_text(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _ordering_flag(text: str) -> VonRoosOrdering:
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError
        return VonRoosOrdering(*parts)
    except (ValueError, PdemError):
        raise argparse.ArgumentTypeError(
            f"expected 'a,b,c' with a+b+c = -1, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", required=True, choices=sorted(_KINDS))
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="deformation strength of the mass law")
    common.add_argument("--n-max", type=int, default=None,
                        help="highest level/degree (default min(9, cutoff-1))")
    common.add_argument("--grid-n", type=int, default=4000)
    common.add_argument("--tail-tolerance", type=float, default=1e-12)
    common.add_argument("--output-dir", default=None,
                        help="write artifacts here instead of stdout")
    common.add_argument("--format", choices=["csv", "json", "both"],
                        default="csv")

    parser = argparse.ArgumentParser(
        prog="pdemosc",
        description="Spectra and eigenfunctions of position-dependent-mass "
                    "nonlinear oscillators, computed algebraically and "
                    "cross-checked by finite differences.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common],
                   help="algebraic vs numeric energy levels")
    p_eig = sub.add_parser("eigenfunctions", parents=[common],
                           help="grid samples of the bound states")
    p_eig.add_argument("--source", choices=["algebraic", "numeric"],
                       default="algebraic")
    p_pol = sub.add_parser("polynomials", parents=[common],
                           help="exact deformed-polynomial coefficients")
    p_pol.add_argument("--symbolic", action="store_true",
                       help="also print human-readable expanded forms")
    sub.add_parser("verify", parents=[common],
                   help="run all operator-identity residual checks")
    p_cmp = sub.add_parser("compare-ordering", parents=[common],
                           help="spectra under alternative kinetic orderings")
    p_cmp.add_argument("--ordering", action="append", type=_ordering_flag,
                       default=None, metavar="a,b,c")
    return parser


def _resolve_n_max(family, requested):
    """Default min(9, cutoff−1); refuse explicit requests past the cutoff."""
    count = bound_state_count(family)
    if requested is None:
        return 9 if count is None else min(9, count - 1)
    if requested < 0:
        raise PdemError(f"n-max must be nonnegative, got {requested}")
    if count is not None and requested >= count:
        raise PdemError(
            f"requested levels up to n = {requested}, but this family binds "
            f"only {count} states (n = 0..{count - 1}); "
            f"levels at and above the cutoff are not bound")
    return requested


def _emit(args, base: str, csv_text, json_text) -> None:
    """Route artifacts to --output-dir files or stdout, per --format."""
    want_csv = csv_text is not None and args.format in ("csv", "both")
    want_json = json_text is not None and args.format in ("json", "both")
    if json_text is not None and csv_text is None:
        want_json = True  # JSON-only artifacts ignore --format
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        if want_csv:
            path = os.path.join(args.output_dir, base + ".csv")
            with open(path, "w") as fh:
                fh.write(csv_text)
            print(f"wrote {path}")
        if want_json:
            path = os.path.join(args.output_dir, base + ".json")
            with open(path, "w") as fh:
                fh.write(json_text)
            print(f"wrote {path}")
    else:
        if want_csv:
            sys.stdout.write(csv_text)
        if want_json:
            sys.stdout.write(json_text + "\n")


def _grid_dict(grid) -> dict:
    return {"lo": grid.lo, "hi": grid.hi, "n": grid.n}


def _cmd_spectrum(args, family) -> int:
    n_max = _resolve_n_max(family, args.n_max)
    grid = build_grid(family, args.grid_n, args.tail_tolerance)
    sol = eigen_tridiagonal(assemble_sturm_liouville(family, grid),
                            n_max + 1, grid.h)
    lines = ["n,energy_algebraic,energy_numeric,abs_error"]
    levels = []
    for n in range(n_max + 1):
        e_alg = energy(family, n)
        e_num = float(sol.eigenvalues[n])
        err = abs(e_alg - e_num)
        lines.append(f"{n},{_fmt(e_alg)},{_fmt(e_num)},{_fmt(err)}")
        levels.append({"n": n, "energy_algebraic": e_alg,
                       "energy_numeric": e_num, "abs_error": err})
    payload = {"family": args.family, "alpha": args.alpha, "lambda": args.lam,
               "grid": _grid_dict(grid), "levels": levels}
    _emit(args, "spectrum", "\n".join(lines) + "\n", _json_text(payload))
    return 0


def _cmd_eigenfunctions(args, family) -> int:
    n_max = _resolve_n_max(family, args.n_max)
    grid = build_grid(family, args.grid_n, args.tail_tolerance)
    if args.source == "numeric":
        sol = eigen_tridiagonal(assemble_sturm_liouville(family, grid),
                                n_max + 1, grid.h)
        vectors = sol.eigenvectors
        eigenvalues = [float(v) for v in sol.eigenvalues]
    else:
        vectors = np.vstack([eigenfunction_samples(family, n, grid)
                             for n in range(n_max + 1)])
        eigenvalues = [energy(family, n) for n in range(n_max + 1)]
    header = "x," + ",".join(f"phi_{n}" for n in range(n_max + 1))
    lines = [header]
    for i in range(grid.n):
        cells = [_fmt(grid.points[i])]
        cells += [_fmt(vectors[n][i]) for n in range(n_max + 1)]
        lines.append(",".join(cells))
    payload = {"eigenvalues": eigenvalues, "grid": _grid_dict(grid)}
    _emit(args, "eigenfunctions", "\n".join(lines) + "\n", _json_text(payload))
    return 0


def _qpoly_str(qp: dict) -> str:
    if not qp:
        return "0"
    parts = []
    for j in sorted(qp):
        c = qp[j]
        mag = abs(c)
        if j == 0:
            body = str(mag)
        else:
            head = "" if mag == 1 else f"{mag}*"
            body = f"{head}q" if j == 1 else f"{head}q^{j}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _poly_str(poly) -> str:
    if not poly.coeffs:
        return "0"
    parts = []
    for k in sorted(poly.coeffs):
        qp = _qpoly_str(poly.coeffs[k])
        if k == 0:
            parts.append(f"({qp})")
        elif k == 1:
            parts.append(f"({qp})*z")
        else:
            parts.append(f"({qp})*z^{k}")
    return " + ".join(parts)


def _cmd_polynomials(args, family) -> int:
    # degree is a polynomial index, not a level, so no bound-count gate
    count = bound_state_count(family)
    n_max = args.n_max
    if n_max is None:
        n_max = 9 if count is None else min(9, count - 1)
    if n_max < 0:
        raise PdemError(f"n-max must be nonnegative, got {n_max}")
    par = parameterization_for(family.profile.kind)
    polys = [gf_polynomial(n, par) for n in range(n_max + 1)]
    if args.symbolic:
        print(f"# family {args.family}: {_Q_MEANING[par.value]}; z is the "
              f"scaled coordinate")
        for n, p in enumerate(polys):
            print(f"H_{n} = {_poly_str(p)}")
    payload = [to_json_dict(p) for p in polys]
    _emit(args, "polynomials", None, _json_text(payload))
    return 0


def _cmd_verify(args, family) -> int:
    grid = build_grid(family, args.grid_n, args.tail_tolerance)
    report = verify_all(family, grid)
    ok = True
    for name, entry in report.residuals.items():
        status = "PASS" if entry.passed else "FAIL"
        ok = ok and entry.passed
        print(f"{name}: value={_fmt(entry.value)} "
              f"tolerance={_fmt(entry.tolerance)} {status}")
    _emit(args, "verify", None, _json_text(report_to_json_dict(report)))
    return 0 if ok else 3


def _cmd_compare_ordering(args, family) -> int:
    if not args.ordering:
        print("error: compare-ordering needs at least one --ordering a,b,c",
              file=sys.stderr)
        return 2
    n_max = _resolve_n_max(family, args.n_max)
    grid = build_grid(family, args.grid_n, args.tail_tolerance)
    k = n_max + 1
    sym = eigen_tridiagonal(assemble_sturm_liouville(family, grid),
                            k, grid.h).eigenvalues
    results = []
    for ordering in args.ordering:
        t = assemble_von_roos(family, ordering, grid)
        ev = eigen_tridiagonal(t, k, grid.h).eigenvalues
        results.append((ordering, ev, von_roos_asymmetry(family, ordering, grid)))

    def label(o):
        return f"{o.a:g}_{o.b:g}_{o.c:g}"

    header = "n,energy_symmetric"
    for o, _, _ in results:
        header += f",energy_{label(o)},dev_{label(o)}"
    lines = [header]
    for n in range(k):
        cells = [str(n), _fmt(sym[n])]
        for _, ev, _ in results:
            cells += [_fmt(ev[n]), _fmt(ev[n] - sym[n])]
        lines.append(",".join(cells))
    payload = {
        "family": args.family, "alpha": args.alpha, "lambda": args.lam,
        "grid": _grid_dict(grid),
        "symmetric": [float(v) for v in sym],
        "orderings": [
            {"a": o.a, "b": o.b, "c": o.c,
             "eigenvalues": [float(v) for v in ev],
             "deviation_from_symmetric": [float(v - s) for v, s in zip(ev, sym)],
             "asymmetry": asym}
            for o, ev, asym in results
        ],
    }
    _emit(args, "compare_ordering", "\n".join(lines) + "\n", _json_text(payload))
    return 0


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "eigenfunctions": _cmd_eigenfunctions,
    "polynomials": _cmd_polynomials,
    "verify": _cmd_verify,
    "compare-ordering": _cmd_compare_ordering,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        family = make_family(_KINDS[args.family], args.alpha, args.lam)
        return _HANDLERS[args.command](args, family)
    except PdemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
