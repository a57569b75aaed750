"""Elliptic curves y^2 + A1 xy + A3 y = x^3 + A2 x^2 + A4 x + A6 over GF(q).

Points may live over the curve's own field or over any field the
coefficients embed into with the same codes: the quadratic tower GF(q^2)
built by :func:`~lattes_periodic.ffield.quadratic_ext`, or GF(p^n) when all
coefficients lie in the prime field.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .arith import factorize
from .ffield import (
    FieldElement,
    FieldError,
    FieldSpec,
    format_element,
    format_field,
    parse_element,
    parse_field,
    quadratic_ext,
    split_top_level,
)


class CurveError(ValueError):
    pass


class SingularCurveError(CurveError):
    def __init__(self, discriminant: FieldElement):
        super().__init__(f"singular curve: discriminant {discriminant} is zero")
        self.discriminant = discriminant


def _discriminant(F: FieldSpec, a: Sequence[int]) -> int:
    a1, a2, a3, a4, a6 = a
    add, sub, mul, c = F.add, F.sub, F.mul, F.const
    b2 = add(mul(a1, a1), mul(c(4), a2))
    b4 = add(mul(c(2), a4), mul(a1, a3))
    b6 = add(mul(a3, a3), mul(c(4), a6))
    b8 = sub(add(add(mul(mul(a1, a1), a6), mul(c(4), mul(a2, a6))), mul(a2, mul(a3, a3))),
             add(mul(a1, mul(a3, a4)), mul(a4, a4)))
    disc = sub(F.neg(mul(mul(b2, b2), b8)), mul(c(8), mul(b4, mul(b4, b4))))
    disc = sub(disc, mul(c(27), mul(b6, b6)))
    return add(disc, mul(c(9), mul(b2, mul(b4, b6))))


@dataclass(frozen=True)
class WeierstrassCurve:
    field: FieldSpec
    a: tuple[int, int, int, int, int]  # codes of A1, A2, A3, A4, A6

    def __post_init__(self):
        disc = _discriminant(self.field, self.a)
        if disc == 0:
            raise SingularCurveError(FieldElement(self.field, 0))

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.a)

    a1 = property(lambda self: FieldElement(self.field, self.a[0]))
    a2 = property(lambda self: FieldElement(self.field, self.a[1]))
    a3 = property(lambda self: FieldElement(self.field, self.a[2]))
    a4 = property(lambda self: FieldElement(self.field, self.a[3]))
    a6 = property(lambda self: FieldElement(self.field, self.a[4]))

    @property
    def discriminant(self) -> FieldElement:
        return FieldElement(self.field, _discriminant(self.field, self.a))

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def ext(self) -> FieldSpec:
        """GF(q^2) tower used for lifting x-coordinates."""
        return quadratic_ext(self.field)

    def embeds_in(self, F: FieldSpec) -> bool:
        if F == self.field or F.base == self.field:
            return True
        return F.p == self.field.p and all(v < F.p for v in self.a)

    def point(self, x, y, field: FieldSpec | None = None) -> CurvePoint:
        F = field or (x.spec if isinstance(x, FieldElement) else self.field)
        xv = x.value if isinstance(x, FieldElement) else F.const(x)
        yv = y.value if isinstance(y, FieldElement) else F.const(y)
        P = CurvePoint(self, F, (xv, yv))
        if not group(self, F).on_curve(P.xy):
            raise CurveError(f"{P} is not on {self}")
        return P

    def infinity(self, field: FieldSpec | None = None) -> CurvePoint:
        return CurvePoint(self, field or self.field, None)

    def __str__(self) -> str:
        return format_curve(self)


@dataclass(frozen=True)
class CurvePoint:
    curve: WeierstrassCurve
    field: FieldSpec
    xy: tuple[int, int] | None  # codes in ``field``; None is O

    @property
    def is_infinity(self) -> bool:
        return self.xy is None

    @property
    def x(self) -> FieldElement | None:
        return None if self.xy is None else FieldElement(self.field, self.xy[0])

    @property
    def y(self) -> FieldElement | None:
        return None if self.xy is None else FieldElement(self.field, self.xy[1])

    def __add__(self, other: CurvePoint) -> CurvePoint:
        return add(self, other)

    def __neg__(self) -> CurvePoint:
        return negate(self)

    def __sub__(self, other: CurvePoint) -> CurvePoint:
        return add(self, negate(other))

    def __rmul__(self, n: int) -> CurvePoint:
        return scalar_mul(n, self)

    def __str__(self) -> str:
        if self.xy is None:
            return "O"
        return f"({format_element(self.x)},{format_element(self.y)})"


class Group:
    """Chord-tangent group law of a curve over one coordinate field, on codes.

    Points are ``None`` (the identity) or ``(x, y)`` code pairs.
    """

    def __init__(self, curve: WeierstrassCurve, F: FieldSpec):
        if not curve.embeds_in(F):
            raise CurveError(f"{curve} is not defined over {F}")
        self.curve = curve
        self.F = F
        self.a1, self.a2, self.a3, self.a4, self.a6 = curve.a
        ops = F.ops
        self._add, self._sub, self._mul, self._inv, self._neg = ops.add, ops.sub, ops.mul, ops.inv, ops.neg
        self.two = F.const(2)
        self.three = F.const(3)
        self.four = F.const(4)

    def on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        add, mul = self._add, self._mul
        lhs = add(mul(y, y), mul(y, add(mul(self.a1, x), self.a3)))
        rhs = add(mul(add(mul(add(x, self.a2), x), self.a4), x), self.a6)
        return lhs == rhs

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, self._sub(self._neg(y), self._add(self._mul(self.a1, x), self.a3)))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        add, sub, mul = self._add, self._sub, self._mul
        a1, a3 = self.a1, self.a3
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if add(add(y1, y2), add(mul(a1, x1), a3)) == 0:
                return None
            # otherwise Q = P
            den = add(add(mul(self.two, y1), mul(a1, x1)), a3)
            num = sub(add(add(mul(self.three, mul(x1, x1)), mul(self.two, mul(self.a2, x1))), self.a4),
                      mul(a1, y1))
        else:
            num = sub(y2, y1)
            den = sub(x2, x1)
        lam = mul(num, self._inv(den))
        x3 = sub(sub(sub(add(mul(lam, lam), mul(a1, lam)), self.a2), x1), x2)
        y3 = sub(sub(sub(mul(lam, sub(x1, x3)), y1), mul(a1, x3)), a3)
        return (x3, y3)

    def mul(self, n: int, P):
        if n < 0:
            return self.neg(self.mul(-n, P))
        result = None
        addend = P
        while n:
            if n & 1:
                result = self.add(result, addend)
            n >>= 1
            if n:
                addend = self.add(addend, addend)
        return result

    def lift(self, a: int) -> list[int]:
        """y-codes of the points with x-code ``a`` (sorted)."""
        add, mul = self._add, self._mul
        c1 = add(mul(self.a1, a), self.a3)
        rhs = add(mul(add(mul(add(a, self.a2), a), self.a4), a), self.a6)
        return self.F.quadratic_roots(1, c1, self._neg(rhs))

    def count_lifts(self, a: int) -> int:
        """Number of y in the coordinate field with (a, y) on the curve."""
        F, add, mul = self.F, self._add, self._mul
        c1 = add(mul(self.a1, a), self.a3)
        rhs = add(mul(add(mul(add(a, self.a2), a), self.a4), a), self.a6)
        if F.p == 2:
            if c1 == 0:
                return 1
            t = mul(rhs, self._inv(mul(c1, c1)))
            return 0 if F.artin_schreier_root(t) is None else 2
        disc = add(mul(c1, c1), mul(self.four, rhs))
        if disc == 0:
            return 1
        return 0 if F.sqrt(disc) is None else 2


@functools.lru_cache(maxsize=4096)
def group(curve: WeierstrassCurve, F: FieldSpec | None = None) -> Group:
    return Group(curve, F or curve.field)


def _group_of(P: CurvePoint) -> Group:
    return group(P.curve, P.field)


def _point(P: CurvePoint, xy) -> CurvePoint:
    return CurvePoint(P.curve, P.field, xy)


# -- operations ----------------------------------------------------------------

def make_curve(coeffs: Sequence, field: FieldSpec | None = None) -> WeierstrassCurve:
    """Curve from five coefficients (FieldElements, or ints with ``field``)."""
    if len(coeffs) != 5:
        raise CurveError("need exactly five coefficients A1, A2, A3, A4, A6")
    if field is None:
        specs = {c.spec for c in coeffs if isinstance(c, FieldElement)}
        if len(specs) != 1:
            raise CurveError("coefficients must lie in one field")
        (field,) = specs
    codes = []
    for c in coeffs:
        if isinstance(c, FieldElement):
            if c.spec != field:
                raise CurveError("coefficients must lie in one field")
            codes.append(c.value)
        else:
            codes.append(field.const(c))
    return WeierstrassCurve(field, tuple(codes))


def base_change(curve: WeierstrassCurve, F: FieldSpec) -> WeierstrassCurve:
    """The same equation over a field the coefficients embed into."""
    if not curve.embeds_in(F):
        raise CurveError(f"{curve} does not embed into {F}")
    return WeierstrassCurve(F, curve.a)


def negate(P: CurvePoint) -> CurvePoint:
    return _point(P, _group_of(P).neg(P.xy))


def add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.curve != Q.curve or P.field != Q.field:
        raise CurveError("points lie on different curves or coordinate fields")
    return _point(P, _group_of(P).add(P.xy, Q.xy))


def scalar_mul(n: int, P: CurvePoint) -> CurvePoint:
    return _point(P, _group_of(P).mul(n, P.xy))


def lift_x(a: FieldElement | None, curve: WeierstrassCurve,
           ext: FieldSpec | None = None) -> list[CurvePoint]:
    """Points of E(GF(q^2)) over ``a`` in P¹(GF(q)); ``None`` stands for ∞."""
    ext = ext or curve.ext
    if a is None:
        return [curve.infinity(ext)]
    if a.spec != curve.field:
        raise CurveError("x-coordinate must lie in the curve's field")
    g = group(curve, ext)
    ys = g.lift(a.value)
    if not ys:
        raise CurveError(f"{a} has no lift over GF({ext.q})")
    return [CurvePoint(curve, ext, (a.value, y)) for y in ys]


def count_points(curve: WeierstrassCurve) -> int:
    """#E(GF(q)) by solving the y-quadratic over every x."""
    g = group(curve)
    return 1 + sum(g.count_lifts(x) for x in range(curve.q))


def rational_points(curve: WeierstrassCurve) -> list[CurvePoint]:
    g = group(curve)
    pts = [curve.infinity()]
    for x in range(curve.q):
        pts.extend(CurvePoint(curve, curve.field, (x, y)) for y in g.lift(x))
    return pts


@dataclass(frozen=True)
class TraceData:
    """Trace of Frobenius ``tau`` of a curve over GF(q), with #E = q + 1 - tau."""

    q: int
    tau: int

    def __post_init__(self):
        if self.tau * self.tau > 4 * self.q:
            raise CurveError(f"Hasse bound violated: tau={self.tau}, q={self.q}")

    def seq(self, n: int) -> int:
        return trace_sequence(self, n)


def trace(curve: WeierstrassCurve) -> TraceData:
    return _trace(curve)


@functools.lru_cache(maxsize=4096)
def _trace(curve: WeierstrassCurve) -> TraceData:
    return TraceData(curve.q, curve.q + 1 - count_points(curve))


def trace_sequence(td: TraceData, n: int) -> int:
    """τ_n, the trace over GF(q^n): τ_0 = 2, τ_1 = τ, τ_n = τ τ_{n-1} - q τ_{n-2}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = 2, td.tau
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, td.tau * cur - td.q * prev
    return cur


def group_order(curve: WeierstrassCurve, F: FieldSpec) -> int:
    """#E(F) for a coordinate field F of order q^n."""
    if F == curve.field:
        return count_points(curve)
    q, Q = curve.q, F.q
    n, power = 0, 1
    while power < Q:
        power *= q
        n += 1
    if power != Q:
        raise CurveError(f"GF({Q}) is not an extension of GF({q})")
    return Q + 1 - trace_sequence(trace(curve), n)


def point_order(P: CurvePoint, group_order_hint: int | None = None) -> int:
    """Least m ≥ 1 with mP = O, descending through the divisors of the group order."""
    g = _group_of(P)
    if P.xy is None:
        return 1
    N = group_order_hint if group_order_hint is not None else group_order(P.curve, P.field)
    if g.mul(N, P.xy) is not None:
        raise CurveError(f"{P} is not killed by the group order {N}")
    m = N
    for ell in factorize(N):
        while m % ell == 0 and g.mul(m // ell, P.xy) is None:
            m //= ell
    return m


def _smallest_nonsquare(F: FieldSpec) -> int:
    for v in range(1, F.q):
        if F.sqrt(v) is None:
            return v
    raise FieldError(f"GF({F.q}) has no non-squares")


def absolute_trace(F: FieldSpec, a: int) -> int:
    """Tr_{GF(q)/GF(p)}(a) as a code in the prime field."""
    total, cur = 0, a
    for _ in range(F.k):
        total = F.add(total, cur)
        cur = F.pow(cur, F.p)
    return total


def _first_trace_one(F: FieldSpec) -> int:
    for v in range(1, F.q):
        if absolute_trace(F, v) == 1:
            return v
    raise FieldError(f"no trace-one element in GF({F.q})")


def quadratic_twist(curve: WeierstrassCurve) -> WeierstrassCurve:
    """A curve over the same field with trace -τ, verified by counting.

    Odd characteristic: complete the square to y^2 = x^3 + (b2/4)x^2 + (b4/2)x + b6/4
    and scale by the smallest non-square g.  Characteristic 2: add γ·(A1 x + A3)^2
    to the right-hand side, with γ the first element of absolute trace one.
    """
    F = curve.field
    a1, a2, a3, a4, a6 = curve.a
    add, mul, c = F.add, F.mul, F.const
    if F.p == 2:
        gamma = _first_trace_one(F)
        coeffs = (a1, add(a2, mul(gamma, mul(a1, a1))), a3, a4, add(a6, mul(gamma, mul(a3, a3))))
    else:
        g = _smallest_nonsquare(F)
        b2 = add(mul(a1, a1), mul(c(4), a2))
        b4 = add(mul(c(2), a4), mul(a1, a3))
        b6 = add(mul(a3, a3), mul(c(4), a6))
        g2 = mul(g, g)
        coeffs = (0, mul(g, mul(b2, F.inv(c(4)))), 0,
                  mul(g2, mul(b4, F.inv(c(2)))), mul(mul(g2, g), mul(b6, F.inv(c(4)))))
    twist = WeierstrassCurve(F, coeffs)
    if count_points(twist) != 2 * (F.q + 1) - count_points(curve):
        raise CurveError(f"twist construction failed for {curve}")
    return twist


@dataclass(frozen=True)
class EigenspaceSplit:
    """Points of E(GF(q^2)) fixed (``A``) or negated (``Aprime``) by Frobenius."""

    A: tuple[CurvePoint, ...]
    Aprime: tuple[CurvePoint, ...]


def frobenius_point(P: CurvePoint, q0: int) -> CurvePoint:
    if P.xy is None:
        return P
    F = P.field
    return _point(P, (F.frobenius_code(P.xy[0], q0), F.frobenius_code(P.xy[1], q0)))


def eigenspace_split(curve: WeierstrassCurve, ext: FieldSpec | None = None) -> EigenspaceSplit:
    ext = ext or curve.ext
    if ext.base != curve.field:
        raise CurveError("eigenspaces live in the quadratic tower over the curve's field")
    g = group(curve, ext)
    q = curve.q
    O = curve.infinity(ext)
    A, Aprime = [O], [O]
    for x in range(q):
        for y in g.lift(x):
            P = (x, y)
            FP = (x, ext.frobenius_code(y, q))
            pt = CurvePoint(curve, ext, P)
            if FP == P:
                A.append(pt)
            if FP == g.neg(P):
                Aprime.append(pt)
    return EigenspaceSplit(tuple(A), tuple(Aprime))


# -- enumeration and text forms ------------------------------------------------

def iter_curves(F: FieldSpec, stats: dict | None = None) -> Iterator[WeierstrassCurve]:
    """All smooth Weierstrass curves over F in coefficient-code order.

    Singular tuples are skipped and tallied in ``stats['singular']``.
    """
    for a in itertools.product(range(F.q), repeat=5):
        if _discriminant(F, a) == 0:
            if stats is not None:
                stats["singular"] = stats.get("singular", 0) + 1
            continue
        yield WeierstrassCurve(F, a)


def parse_curve(text: str) -> WeierstrassCurve:
    """``FIELD:a1,a2,a3,a4,a6``, e.g. ``5:0,0,0,1,1`` or ``2^2:[1,1],0,[0,1],1,1``."""
    if ":" not in text:
        raise CurveError(f"bad curve spec {text!r}: expected FIELD:a1,a2,a3,a4,a6")
    field_text, coeff_text = text.split(":", 1)
    F = parse_field(field_text)
    items = split_top_level(coeff_text)
    if len(items) != 5:
        raise CurveError(f"bad curve spec {text!r}: need five coefficients")
    return make_curve([parse_element(s, F) for s in items], F)


def format_curve(curve: WeierstrassCurve) -> str:
    return format_field(curve.field) + ":" + ",".join(format_element(c) for c in curve.coeffs)
