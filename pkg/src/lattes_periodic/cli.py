"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 invalid input or curve, 3 verification
mismatch, 4 tower search did not stabilize within the cap.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from typing import Sequence

from .curve import (
    CurveError,
    SingularCurveError,
    WeierstrassCurve,
    base_change,
    iter_curves,
    parse_curve,
    trace,
)
from .density import (
    DensityError,
    delta_formula,
    delta_supersingular,
    delta_tower,
    supersingular_trace,
    tower_limit,
)
from .ffield import FieldElement, FieldError, FieldSpec, format_element, make_field, parse_field
from .lattes import LattesError, LattesMap, is_permutation, lattes_table, oracle_density, write_graph_csv
from .sweep import coprime_ds, field_of_order, prime_powers, sweep_field

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH, EXIT_UNSTABLE = 0, 1, 2, 3, 4
DEFAULT_ORACLE_MAX = 1 << 14


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return _frac(v)
    if v is None:
        return "-"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def render_rows(rows: list[dict], fmt: str, out, footer: str | None = None) -> None:
    if fmt == "json":
        out.write(json.dumps(_jsonable(rows), indent=2) + "\n")
        return
    if not rows:
        if footer:
            out.write(footer + "\n")
        return
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        w.writerows(cells)
        if footer:
            out.write(f"# {footer}\n")
        return
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")
    if footer:
        out.write(footer + "\n")


def render_record(record: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(_jsonable(record), indent=2) + "\n")
    elif fmt == "csv":
        render_rows([record], "csv", out)
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            out.write(f"{k.ljust(width)}  {_cell(v)}\n")


# -- subcommands -------------------------------------------------------------------

def cmd_density(args, out, err) -> int:
    curve = parse_curve(args.curve)
    LattesMap(curve, args.d)
    report = delta_tower(trace(curve), args.d, args.n)
    if args.format == "json":
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        render_record(report.to_row(), args.format, out)
    return EXIT_OK


def _oracle_field(curve: WeierstrassCurve, n: int) -> WeierstrassCurve:
    if n == 1:
        return curve
    F = curve.field
    return base_change(curve, make_field(F.p, F.k * n))


def cmd_oracle(args, out, err) -> int:
    curve = _oracle_field(parse_curve(args.curve), args.n)
    lmap = LattesMap(curve, args.d)
    graph = lattes_table(lmap)
    if args.emit_graph:
        with open(args.emit_graph, "w", newline="") as fh:
            write_graph_csv(graph, curve.field, fh)
    record = {
        "curve": args.curve,
        "q": curve.q,
        "n": args.n,
        "d": args.d,
        "per_count": sum(graph.periodic),
        "delta": oracle_density(lmap, graph),
        "permutation": is_permutation(graph),
    }
    render_record(record, args.format, out)
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    if args.q_max < 2 or args.d_max < 2:
        raise UsageError("--q-max and --d-max must be at least 2")
    rows = []
    fault = args.inject_fault
    for q in prime_powers(args.q_max):
        F = field_of_order(q)
        stats: dict = {}
        n_curves = checks = 0
        for res in sweep_field(F, range(2, args.d_max + 1), jobs=args.jobs, fault=fault, stats=stats):
            fault = False
            n_curves += 1
            checks += res.checks
            if res.mismatches:
                m = res.mismatches[0]
                err.write("verification mismatch\n")
                err.write(f"  curve:   {m.curve}\n  tau:     {res.tau}\n  d:       {m.d}\n"
                          f"  check:   {m.check}\n  formula: {m.formula}\n  oracle:  {m.oracle}\n")
                return EXIT_MISMATCH
        rows.append({"q": q, "curves": n_curves, "singular": stats.get("singular", 0),
                     "d_values": len(coprime_ds(range(2, args.d_max + 1), F.p)), "checks": checks})
    total = sum(r["checks"] for r in rows)
    render_rows(rows, args.format, out, footer=f"all {total} checks passed")
    return EXIT_OK


def cmd_tower(args, out, err) -> int:
    curve = parse_curve(args.curve)
    LattesMap(curve, args.d)
    rep = tower_limit(trace(curve), args.d, args.n, m_max=args.m_max, N_cap=args.n_cap)
    if args.format == "json":
        out.write(json.dumps(rep.to_dict(), indent=2) + "\n")
    else:
        head = {"n": rep.n, "c": rep.c, "N_emp": rep.N_emp, "step": rep.step, "limit": rep.limit}
        if args.format == "table":
            render_record(head, "table", out)
            out.write("\n")
            render_rows([{"m": s.m, "valuations_match": s.valuations_match, "gap_ok": s.gap_ok,
                          "delta": s.delta} for s in rep.samples], "table", out)
        else:
            render_rows([{**head, "m": s.m, "valuations_match": s.valuations_match, "gap_ok": s.gap_ok,
                          "delta": s.delta} for s in rep.samples], "csv", out)
    if not rep.stabilized:
        err.write(f"warning: no stabilization for N <= {args.n_cap} within m <= {args.m_max}\n")
        return EXIT_UNSTABLE
    return EXIT_OK


def _reduced_forms(F: FieldSpec, bound: int):
    # every curve is isomorphic to one of these, so the search stays exhaustive
    r = range(bound)
    if F.p >= 5:
        shapes = ((0, 0, 0, a4, a6) for a4 in r for a6 in r)
    elif F.p == 3:
        shapes = ((0, a2, 0, a4, a6) for a2 in r for a4 in r for a6 in r)
    else:
        shapes = itertools.product(r, repeat=5)
    for a in shapes:
        try:
            yield WeierstrassCurve(F, tuple(a))
        except SingularCurveError:
            continue


def find_trace_zero_curve(F: FieldSpec) -> WeierstrassCurve | None:
    """First τ = 0 curve over F, preferring coefficients in the prime field."""
    for bound in ((F.p, F.q) if F.k > 1 else (F.q,)):
        for c in _reduced_forms(F, bound):
            if trace(c).tau == 0:
                return c
    return None


def cmd_supersingular(args, out, err) -> int:
    if args.curve:
        curve = parse_curve(args.curve)
        if trace(curve).tau != 0:
            raise CurveError(f"{args.curve} has trace {trace(curve).tau}, not 0")
        F = curve.field
    else:
        F = parse_field(args.field)
        curve = find_trace_zero_curve(F)
        if curve is None:
            raise CurveError(f"no curve with trace 0 over GF({F.q})")
    q = F.q
    ns = [args.n] if args.n else range(1, args.n_max + 1)
    rows = []
    ok = True
    for n in ns:
        rep = delta_supersingular(q, args.ell, n)
        formula = delta_formula(q ** n, supersingular_trace(q, n), args.ell)
        oracle = None
        if q ** n <= args.oracle_max and all(v < F.p for v in curve.a):
            oracle = oracle_density(LattesMap(_oracle_field(curve, n), args.ell))
        match = rep.delta == formula and (oracle is None or oracle == rep.delta)
        ok &= match
        row = {"n": n, "branch": rep.branch, "e": rep.e, "w_n": rep.w_n, "epsilon": rep.epsilon,
               "delta_tau0": rep.delta, "delta_formula": formula, "delta_oracle": oracle,
               "match": match}
        if args.paper_epsilon:
            row.update({"paper_epsilon": rep.paper_epsilon, "paper_delta": rep.paper_delta,
                        "paper_integral": rep.paper_integral, "paper_divergent": rep.paper_divergent})
        rows.append(row)
    render_rows(rows, args.format, out,
                footer=None if args.format == "json" else f"curve {curve} (trace 0), ell={args.ell}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_scan(args, out, err) -> int:
    F = parse_field(args.field)
    LattesMap(next(iter_curves(F)), args.d)  # reject d not coprime to p up front
    stats: dict = {}
    rows = []
    ok = True
    for res in sweep_field(F, [args.d], jobs=args.jobs, stats=stats):
        _, formula, oracle, _, perm = res.rows[0]
        ok &= not res.mismatches
        row = {f"a{i}": format_element(FieldElement(F, c)) for i, c in zip((1, 2, 3, 4, 6), res.curve.a)}
        row.update({"tau": res.tau, "delta_formula": formula, "delta_oracle": oracle,
                    "permutation": perm, "match": not res.mismatches})
        rows.append(row)
    singular = stats.get("singular", 0)
    if args.format == "json":
        out.write(json.dumps({"curves": _jsonable(rows), "smooth": len(rows),
                              "singular": singular}, indent=2) + "\n")
    else:
        render_rows(rows, args.format, out, footer=f"smooth={len(rows)} singular={singular}")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lattes-periodic",
                     description="Periodic-point densities of Lattès maps over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("density", help="closed-form density of L_d on P1(GF(q^n))")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    common(p)

    p = sub.add_parser("oracle", help="brute-force periodic points of L_d")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=1, help="work over GF(q^n) (prime-field coefficients)")
    p.add_argument("--emit-graph", metavar="PATH")
    common(p)

    p = sub.add_parser("verify", help="formula vs oracle over every curve of small fields")
    p.add_argument("--q-max", type=int, default=7)
    p.add_argument("--d-max", type=int, default=10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    common(p)

    p = sub.add_parser("tower", help="stabilization of densities along q^m")
    p.add_argument("--curve", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m-max", type=int, default=400)
    p.add_argument("--n-cap", type=int, default=8)
    common(p)

    p = sub.add_parser("supersingular", help="trace-zero curves and L_ell")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--field")
    src.add_argument("--curve")
    p.add_argument("--ell", type=int, required=True)
    rng = p.add_mutually_exclusive_group()
    rng.add_argument("--n", type=int)
    rng.add_argument("--n-max", type=int, default=6)
    p.add_argument("--paper-epsilon", action="store_true",
                   help="show where the printed sign table disagrees")
    p.add_argument("--oracle-max", type=int, default=DEFAULT_ORACLE_MAX)
    common(p)

    p = sub.add_parser("scan", help="per-curve densities over every curve of a field")
    p.add_argument("--field", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        handler = {
            "verify": cmd_verify,
            "density": cmd_density,
            "oracle": cmd_oracle,
            "tower": cmd_tower,
            "supersingular": cmd_supersingular,
            "scan": cmd_scan,
        }[args.command]
        return handler(args, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (FieldError, CurveError, LattesError, DensityError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI in-process, returning (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
