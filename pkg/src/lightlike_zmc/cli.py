"""Command line interface: ``lightlike-zmc <subcommand> [options]``.

Subcommands: coeffs, mesh, residual, certify, classify, hyper.  The exit code
is 0 only when every check a subcommand runs passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certify as cert
from .exact_poly import as_rational
from .hypersurface import (
    HypersurfaceSlice,
    causal_quantity_hyper,
    evaluate_hyper,
    residual_hyper,
    residual_hyper_full,
)
from .recurrence import DEFAULT_ORDER, compare_with_reference, generate, invariant_report
from .surface import (
    DEFAULT_CAUSAL_TOL,
    build_mesh,
    loglog_slope,
    residual_numeric,
    residual_symbolic,
    truncate,
    write_csv,
    write_obj,
)

DEFAULT_C = "1/2"
DEFAULT_DELTA = 0.8
DEFAULT_RANGE = (-0.8, 0.8)


def _positive_rational(text: str) -> Fraction:
    try:
        value = as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _order(text: str) -> int:
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError(f"order must be >= 3, got {value}")
    return value


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from exc
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _steps(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"steps must be >= 2, got {value}")
    return value


def _dim(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", type=_positive_rational, default=None,
                        help="surface parameter as p/q (default 1/2)")
    common.add_argument("--n", type=_order, default=DEFAULT_ORDER, help="truncation order N")
    common.add_argument("--delta", type=_positive_float, default=DEFAULT_DELTA,
                        help="half-width of the y-interval for certification")
    common.add_argument("--xrange", type=_range, default=DEFAULT_RANGE, metavar="A:B")
    common.add_argument("--yrange", type=_range, default=DEFAULT_RANGE, metavar="A:B")
    common.add_argument("--steps", type=_steps, default=101)
    common.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=["csv", "obj", "json", "table"], default=None)
    common.add_argument("--tol", type=_positive_float, default=DEFAULT_CAUSAL_TOL,
                        help="light-like classification tolerance")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(
        prog="lightlike-zmc",
        description="Zero mean curvature surfaces changing type across a light-like line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="coefficient table b_0..b_N")
    p.add_argument("--symbolic", action="store_true", help="keep c symbolic even if --c is given")

    p = sub.add_parser("mesh", parents=[common], help="export a surface mesh (CSV or OBJ)")
    p.add_argument("--certified-column", action="store_true",
                   help="append a certified-domain flag column to the CSV")

    p = sub.add_parser("residual", parents=[common], help="symbolic and numeric residual checks")
    p.add_argument("--y", type=float, default=0.1, help="y at which the x-sweep is taken")

    p = sub.add_parser("certify", parents=[common], help="convergence certificate")
    p.add_argument("--y-samples", type=int, default=50)
    p.add_argument("--lemma-kmax", type=int, default=200)

    sub.add_parser("classify", parents=[common], help="causal-type map on a grid")

    p = sub.add_parser("hyper", parents=[common], help="cylindrical hypersurface checks")
    p.add_argument("--dim", type=_dim, default=3, help="ambient dimension n of the graph domain")
    p.add_argument("--samples", type=int, default=20)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _c(args) -> Fraction:
    return args.c if args.c is not None else Fraction(DEFAULT_C)


def cmd_coeffs(args) -> int:
    table = generate(args.n)
    c = None if args.symbolic else args.c
    invariants = invariant_report(table)
    comparison = compare_with_reference(table)
    rows = []
    for k, p in enumerate(table.coefficients):
        if c is None:
            terms = [{"c_exp": j, "y_exp": i, "coeff": str(v)} for (j, i), v in sorted(p.terms.items())]
            text = str(p)
        else:
            yp = p.specialize_c(c)
            terms = [{"y_exp": i, "coeff": str(v)} for i, v in enumerate(yp.coeffs) if v]
            text = " + ".join(f"({v})*y^{i}" for i, v in enumerate(yp.coeffs) if v) or "0"
        rows.append({"k": k, "text": text, "terms": terms, "invariants": invariants[k]})
    ok = all(
        r["odd"] and r["weight"] and r["initial_conditions"] and r["degree_bound"] for r in invariants
    )
    mismatches = [r for r in comparison if not r["match"]]
    explained = all(r.get("note", "").startswith("quoted form violates") for r in mismatches)

    if args.format == "json":
        doc = {
            "order": table.order,
            "c": None if c is None else str(c),
            "characteristic_mu": str(table.characteristic_mu),
            "coefficients": rows,
            "reference_comparison": comparison,
            "invariants_ok": ok,
        }
        _emit(_dump(doc), args.out)
    else:
        lines = [f"# b_k for k = 0..{table.order}" + ("" if c is None else f", c = {c}")]
        for r in rows:
            inv = r["invariants"]
            flags = "ok" if all(inv[key] for key in ("odd", "weight", "initial_conditions", "degree_bound")) else "FAIL"
            lines.append(f"b_{r['k']:<3d} = {r['text']}    [invariants {flags}]")
        for m in mismatches:
            lines.append(f"note: b_{m['k']} generated {m['generated']}, quoted {m['reference']}: {m['note']}")
        _emit("\n".join(lines), args.out)
    return 0 if ok and explained else 1


def cmd_mesh(args) -> int:
    c = _c(args)
    sol = truncate(None, c, args.n)
    consts = cert.compute_constants(float(c), args.delta)
    mesh = build_mesh(sol, args.xrange, args.yrange, args.steps, args.tol,
                      certified_box=(consts.certified_x_radius, args.delta))
    mesh.metadata["certified_x_radius"] = consts.certified_x_radius
    mesh.metadata["delta"] = args.delta
    fmt = args.format or "csv"
    if fmt not in ("csv", "obj"):
        print(f"mesh: unsupported format {fmt!r}", file=sys.stderr)
        return 2
    out = args.out or Path(f"mesh.{fmt}")
    try:
        if fmt == "csv":
            write_csv(mesh, out, certified_column=args.certified_column)
        else:
            write_obj(mesh, out)
        Path(str(out) + ".meta.json").write_text(_dump(mesh.metadata) + "\n")
    except OSError as exc:
        print(f"mesh: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out} ({mesh.shape[1]}x{mesh.shape[0]} vertices); certified |x| <= {consts.certified_x_radius:.6g}")
    return 0


def cmd_residual(args) -> int:
    c = _c(args)
    table = generate(args.n)
    sym = residual_symbolic(table)
    sol = truncate(table, c)
    xs = np.logspace(-3, -1, 9)
    values = [residual_numeric(sol, float(x), args.y, exact=True) for x in xs]
    slope = loglog_slope(xs, values)
    slope_ok = slope >= args.n - 0.5
    doc = {
        "order": args.n,
        "c": str(c),
        "symbolic": {
            "all_zero": sym.ok,
            "decomposition_identity": sym.identity_ok,
            "source_terms_match": sym.sources_ok,
            "summary": sym.summary(),
        },
        "numeric": {
            "y": args.y,
            "x": [float(x) for x in xs],
            "residual": values,
            "loglog_slope": slope,
            "required_slope": args.n - 0.5,
            "passed": slope_ok,
        },
    }
    if args.format == "json":
        _emit(_dump(doc), args.out)
    else:
        lines = [sym.summary(),
                 f"decomposition identity: {sym.identity_ok}; source terms match: {sym.sources_ok}",
                 f"numeric sweep at y = {args.y}: log-log slope {slope:.4f} (need >= {args.n - 0.5})"]
        lines += [f"  x = {x:.3e}  residual = {v:.6e}" for x, v in zip(xs, values)]
        _emit("\n".join(lines), args.out)
    return 0 if sym.ok and sym.identity_ok and sym.sources_ok and slope_ok else 1


def cmd_certify(args) -> int:
    report = cert.certify(_c(args), args.delta, args.n, args.y_samples, args.seed, args.lemma_kmax)
    if args.format == "table":
        r = report
        lines = [f"tau = {r.tau:.10g}", f"M = {r.M:.10g}", f"C = {r.C:.10g}",
                 f"theta0 = {r.theta0:.10g}", f"certified |x| <= {r.certified_x_radius:.6g}"]
        lines += [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in r.section_passed().items()]
        lines.append(f"n0 observed: {r.n0_observed}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(report.to_json(), args.out)
    if not report.passed:
        print(f"certify: {report.first_failure()}", file=sys.stderr)
        return 1
    return 0


def cmd_classify(args) -> int:
    sol = truncate(None, _c(args), args.n)
    mesh = build_mesh(sol, args.xrange, args.yrange, args.steps, args.tol)
    X, Y = np.meshgrid(mesh.x, mesh.y)
    away = (X != 0) & (Y != 0)
    left = away & (X < 0)
    right = away & (X > 0)

    def counts(mask):
        labs, n = np.unique(mesh.causal[mask], return_counts=True)
        return {str(k): int(v) for k, v in zip(labs, n)}

    left_counts, right_counts = counts(left), counts(right)
    frac_s = left_counts.get("S", 0) / max(int(left.sum()), 1)
    frac_t = right_counts.get("T", 0) / max(int(right.sum()), 1)
    on_line = X == 0
    line_all_l = bool(on_line.any()) and bool(np.all(mesh.causal[on_line] == "L"))
    passed = frac_s >= 0.99 and frac_t >= 0.99 and (line_all_l or not on_line.any())
    doc = {
        "c": str(_c(args)),
        "order": args.n,
        "x": [float(v) for v in mesh.x],
        "y": [float(v) for v in mesh.y],
        "labels": ["".join(row) for row in mesh.causal],
        "summary": {
            "x_negative": left_counts,
            "x_positive": right_counts,
            "x_zero_all_lightlike": line_all_l,
            "spacelike_fraction_x_negative": frac_s,
            "timelike_fraction_x_positive": frac_t,
            "passed": passed,
        },
    }
    if args.format == "json":
        _emit(_dump(doc), args.out)
    else:
        lines = [f"# rows: y from {mesh.y[-1]:.3f} down to {mesh.y[0]:.3f}; columns: x ascending"]
        lines += ["".join(row) for row in mesh.causal[::-1]]
        lines.append(f"x<0: {left_counts}  x>0: {right_counts}  x=0 all L: {line_all_l}")
        _emit("\n".join(lines), args.out)
    return 0 if passed else 1


def cmd_hyper(args) -> int:
    sol = truncate(None, _c(args), args.n)
    h = HypersurfaceSlice(sol, args.dim)
    rng = np.random.default_rng(args.seed)
    rows = []
    for _ in range(args.samples):
        head = rng.uniform(-0.05, 0.05, 2)
        tail = rng.uniform(-1.0, 1.0, args.dim - 2)
        point = np.concatenate([head, tail])
        shifted = np.concatenate([head, rng.uniform(-1.0, 1.0, args.dim - 2)])
        r_hyper = residual_hyper(h, point)
        r_2d = residual_numeric(sol, float(head[0]), float(head[1]))
        r_full = residual_hyper_full(h, point)
        rows.append({
            "point": [float(v) for v in point],
            "residual": r_hyper,
            "bit_equal_2d": r_hyper == r_2d,
            "full_operator": r_full,
            "cylindrical": evaluate_hyper(h, point) == evaluate_hyper(h, shifted)
            and r_hyper == residual_hyper(h, shifted),
            "passed": abs(r_hyper) <= 1e-10 and abs(r_full) <= 1e-10,
        })
    flips = []
    for y in (-0.2, -0.1, -0.05, 0.05, 0.1, 0.2):
        qm = causal_quantity_hyper(h, np.array([-0.1, y] + [0.0] * (args.dim - 2)))
        qp = causal_quantity_hyper(h, np.array([0.1, y] + [0.0] * (args.dim - 2)))
        flips.append({"y": y, "minus": qm, "plus": qp, "flips": qm > 0 > qp})
    passed = all(r["passed"] and r["bit_equal_2d"] and r["cylindrical"] for r in rows) and all(
        f["flips"] for f in flips
    )
    doc = {"dim": args.dim, "order": args.n, "c": str(_c(args)), "points": rows,
           "causal_flip": flips, "passed": passed}
    if args.format == "json":
        _emit(_dump(doc), args.out)
    else:
        worst = max(abs(r["residual"]) for r in rows) if rows else 0.0
        lines = [
            f"n = {args.dim}, {len(rows)} points",
            f"bit-equality with surface path: {all(r['bit_equal_2d'] for r in rows)}",
            f"cylindrical invariance: {all(r['cylindrical'] for r in rows)}",
            f"max |residual|: {worst:.3e}",
            f"causal flip across x_1 = 0: {all(f['flips'] for f in flips)}",
            "passed" if passed else "FAILED",
        ]
        _emit("\n".join(lines), args.out)
    return 0 if passed else 1


COMMANDS = {
    "coeffs": cmd_coeffs,
    "mesh": cmd_mesh,
    "residual": cmd_residual,
    "certify": cmd_certify,
    "classify": cmd_classify,
    "hyper": cmd_hyper,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
