"""Exhaustive formula-versus-oracle checks over all curves of small fields."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .arith import is_prime, prime_power
from .curve import WeierstrassCurve, count_points, iter_curves, quadratic_twist, trace
from .density import delta_formula, gap_bound_holds, is_permutation_formula
from .ffield import FieldSpec, format_field, make_field
from .lattes import FunctionalGraph, is_permutation, lattes_tables


@dataclass(frozen=True)
class Mismatch:
    curve: str
    d: int | None
    check: str
    formula: str
    oracle: str


@dataclass
class CurveResult:
    curve: WeierstrassCurve
    tau: int
    rows: list[tuple[int, Fraction, Fraction, bool, bool]] = field(default_factory=list)
    checks: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)


def prime_powers(bound: int) -> list[int]:
    return [q for q in range(2, bound + 1) if _is_prime_power(q)]


def _is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ValueError:
        return False
    return True


def field_of_order(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return make_field(p, k)


def coprime_ds(ds: Iterable[int], p: int) -> list[int]:
    return [d for d in ds if d != 0 and math.gcd(d, p) == 1]


def _corrupt(g: FunctionalGraph) -> FunctionalGraph:
    # negative control: send the first non-∞ point somewhere else
    succ = list(g.succ)
    succ[0] = (succ[0] + 1) % len(succ)
    return FunctionalGraph.from_succ(succ)


def check_curve(curve: WeierstrassCurve, ds: list[int], fault: bool = False) -> CurveResult:
    """Formula ≡ oracle, permutation criterion, gap bound and twist count for one curve."""
    q = curve.q
    tau = trace(curve).tau
    res = CurveResult(curve, tau)
    name = str(curve)
    tables = lattes_tables(curve, ds) if ds else {}
    for d in ds:
        g = tables[d]
        if fault:
            g = _corrupt(g)
        oracle = Fraction(sum(g.periodic), q + 1)
        formula = delta_formula(q, tau, d)
        perm_oracle = is_permutation(g)
        perm_formula = is_permutation_formula(q, tau, d)
        gap = gap_bound_holds(q, tau, d)
        res.rows.append((d, formula, oracle, perm_formula, perm_oracle))
        res.checks += 3
        if formula != oracle:
            res.mismatches.append(Mismatch(name, d, "density", str(formula), str(oracle)))
        if perm_formula != perm_oracle:
            res.mismatches.append(Mismatch(name, d, "permutation", str(perm_formula), str(perm_oracle)))
        if not gap:
            res.mismatches.append(Mismatch(name, d, "gap bound", "holds", "violated"))
    twist_count = count_points(quadratic_twist(curve))
    res.checks += 1
    if count_points(curve) + twist_count != 2 * (q + 1):
        res.mismatches.append(Mismatch(name, None, "twist", str(2 * (q + 1)),
                                       str(count_points(curve) + twist_count)))
    return res


def _check_job(args) -> CurveResult:
    curve, ds, fault = args
    return check_curve(curve, ds, fault)


def sweep_field(F: FieldSpec, ds: Iterable[int], jobs: int = 1, fault: bool = False,
                stats: dict | None = None) -> Iterator[CurveResult]:
    """Check every smooth curve over F, yielding results in coefficient order."""
    ds = coprime_ds(ds, F.p)
    curves = iter_curves(F, stats)
    faulted = [fault]

    def jobs_iter():
        for c in curves:
            yield c, ds, faulted[0]
            faulted[0] = False

    if jobs <= 1:
        for job in jobs_iter():
            yield _check_job(job)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order regardless of completion order
        yield from pool.map(_check_job, jobs_iter(), chunksize=256)


def describe_field(F: FieldSpec) -> str:
    return f"GF({format_field(F)})" if not is_prime(F.q) else f"GF({F.q})"
