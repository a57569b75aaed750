"""Lattès maps L_d on P¹(GF(q)) and brute-force periodic-point counts.

P¹(GF(q)) is indexed by field codes ``0 .. q-1`` with ∞ at index ``q``.
L_d is never written down as a rational function: a point is lifted to
E(GF(q^2)), multiplied by d there and projected back.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, TextIO

from .curve import (
    CurvePoint,
    WeierstrassCurve,
    eigenspace_split,
    group,
    point_order,
    trace,
)
from .ffield import FieldElement, FieldSpec, format_element


class LattesError(ValueError):
    pass


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = _Infinity()


@dataclass(frozen=True)
class LattesMap:
    curve: WeierstrassCurve
    d: int

    def __post_init__(self):
        if self.d == 0:
            raise LattesError("d must be nonzero")
        if math.gcd(self.d, self.curve.field.p) != 1:
            raise LattesError(f"d={self.d} is not coprime to the characteristic {self.curve.field.p}")

    @property
    def q(self) -> int:
        return self.curve.q

    @cached_property
    def ext(self) -> FieldSpec:
        return self.curve.ext

    def eval_index(self, i: int) -> int:
        q = self.q
        if i == q:
            return q
        g = group(self.curve, self.ext)
        P = (i, g.lift(i)[0])
        return _project(g.mul(self.d, P), q)


def _project(P, q: int) -> int:
    if P is None:
        return q
    if P[0] >= q:
        raise LattesError(f"x-coordinate code {P[0]} left the base field GF({q})")
    return P[0]


def to_index(a: FieldElement | _Infinity, q: int) -> int:
    if a is INF:
        return q
    return a.value


def from_index(i: int, field: FieldSpec) -> FieldElement | _Infinity:
    return INF if i == field.q else FieldElement(field, i)


def lattes_eval(lmap: LattesMap, a: FieldElement | _Infinity) -> FieldElement | _Infinity:
    if a is not INF and a.spec != lmap.curve.field:
        raise LattesError("point must lie in P¹ of the curve's field")
    return from_index(lmap.eval_index(to_index(a, lmap.q)), lmap.curve.field)


@dataclass(frozen=True)
class FunctionalGraph:
    """Successor table of a self-map of P¹(GF(q)) with per-index periodicity."""

    q: int
    succ: tuple[int, ...]
    periodic: tuple[bool, ...]

    @classmethod
    def from_succ(cls, succ: Iterable[int]) -> FunctionalGraph:
        succ = tuple(succ)
        cycle = _cycle_nodes(succ)
        return cls(len(succ) - 1, succ, tuple(i in cycle for i in range(len(succ))))

    def __len__(self) -> int:
        return len(self.succ)


def _cycle_nodes(succ: tuple[int, ...]) -> set[int]:
    # peel nodes of in-degree 0 until only cycles remain
    n = len(succ)
    indeg = [0] * n
    for s in succ:
        indeg[s] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    alive = [True] * n
    while stack:
        i = stack.pop()
        alive[i] = False
        j = succ[i]
        indeg[j] -= 1
        if indeg[j] == 0:
            stack.append(j)
    return {i for i in range(n) if alive[i]}


def periodic_set(g: FunctionalGraph) -> set[int]:
    return _cycle_nodes(g.succ)


def is_permutation(g: FunctionalGraph) -> bool:
    return all(g.periodic)


def lattes_table(lmap: LattesMap) -> FunctionalGraph:
    return FunctionalGraph.from_succ(lmap.eval_index(i) for i in range(lmap.q + 1))


def lattes_tables(curve: WeierstrassCurve, ds: Iterable[int]) -> dict[int, FunctionalGraph]:
    """Tables for several d at once, sharing one lift and its multiples per point."""
    ds = list(ds)
    for d in ds:
        LattesMap(curve, d)
    q = curve.q
    g = group(curve, curve.ext)
    wanted = {abs(d) for d in ds}
    top = max(wanted)
    succ = {k: [0] * (q + 1) for k in wanted}
    for k in wanted:
        succ[k][q] = q
    for i in range(q):
        P = (i, g.lift(i)[0])
        cur = P
        for k in range(1, top + 1):
            if k in wanted:
                succ[k][i] = _project(cur, q)
            if k < top:
                cur = g.add(cur, P)
    graphs = {k: FunctionalGraph.from_succ(s) for k, s in succ.items()}
    return {d: graphs[abs(d)] for d in ds}


def oracle_density(lmap: LattesMap, graph: FunctionalGraph | None = None) -> Fraction:
    graph = graph or lattes_table(lmap)
    return Fraction(sum(graph.periodic), lmap.q + 1)


def periodic_via_order(lmap: LattesMap) -> set[int]:
    """x-coordinates of Frobenius-eigen points of order coprime to d."""
    curve, q = lmap.curve, lmap.q
    tau = trace(curve).tau
    split = eigenspace_split(curve, lmap.ext)
    out = set()
    for points, n in ((split.A, q + 1 - tau), (split.Aprime, q + 1 + tau)):
        for P in points:
            if math.gcd(point_order(P, n), lmap.d) == 1:
                out.add(q if P.xy is None else P.xy[0])
    return out


def lift_index(curve: WeierstrassCurve, i: int) -> list[CurvePoint]:
    """All points of E(GF(q^2)) over the P¹ index ``i``."""
    ext = curve.ext
    if i == curve.q:
        return [curve.infinity(ext)]
    return [CurvePoint(curve, ext, (i, y)) for y in group(curve, ext).lift(i)]


def graph_rows(g: FunctionalGraph, field: FieldSpec) -> list[list[str]]:
    rows = [["index", "repr", "succ_index", "periodic"]]
    for i, (s, per) in enumerate(zip(g.succ, g.periodic)):
        rep = "inf" if i == field.q else format_element(FieldElement(field, i))
        rows.append([str(i), rep, str(s), "1" if per else "0"])
    return rows


def write_graph_csv(g: FunctionalGraph, field: FieldSpec, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerows(graph_rows(g, field))
