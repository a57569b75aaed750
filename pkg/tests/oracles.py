"""Slow reference implementations used only by the tests.

Each helper reaches its answer by a route that shares no code path with the
package function it is compared against: plain FieldElement arithmetic
instead of code-level tables, repeated addition instead of double-and-add,
pair enumeration instead of quadratic solving, iteration instead of peeling.
"""

from __future__ import annotations

from fractions import Fraction

from lattes_periodic.ffield import FieldElement, FieldSpec


def rhs_lhs(a, x, y):
    a1, a2, a3, a4, a6 = a
    return y * y + a1 * x * y + a3 * y, x * x * x + a2 * x * x + a4 * x + a6


def coeffs_in(curve, F: FieldSpec):
    # codes are shared between a field and its tower or prime-coefficient extension
    return tuple(FieldElement(F, v) for v in curve.a)


def naive_count(curve, F: FieldSpec) -> int:
    """#E(F) by testing every (x, y) pair."""
    a = coeffs_in(curve, F)
    elems = [FieldElement(F, v) for v in range(F.q)]
    total = 1
    for x in elems:
        a1x_a3 = a[0] * x + a[2]
        r = x * x * x + a[1] * x * x + a[3] * x + a[4]
        total += sum(1 for y in elems if y * (y + a1x_a3) == r)
    return total


def naive_points(curve, F: FieldSpec) -> list:
    a = coeffs_in(curve, F)
    elems = [FieldElement(F, v) for v in range(F.q)]
    pts = [None]
    for x in elems:
        for y in elems:
            lhs, rhs = rhs_lhs(a, x, y)
            if lhs == rhs:
                pts.append((x, y))
    return pts


def naive_add(curve, F: FieldSpec, P, Q):
    """Chord-and-tangent on FieldElement pairs; None is the identity."""
    a1, a2, a3, a4, a6 = coeffs_in(curve, F)
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == F.zero:
            return None
        lam = (x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1) / (y1 * 2 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def naive_mul(curve, F: FieldSpec, n: int, P):
    if n < 0:
        a1, _, a3, _, _ = coeffs_in(curve, F)
        P = None if P is None else (P[0], -P[1] - a1 * P[0] - a3)
        n = -n
    R = None
    for _ in range(n):
        R = naive_add(curve, F, R, P)
    return R


def naive_periodic(succ) -> list[bool]:
    """a is periodic iff some iterate f^k(a), 1 ≤ k ≤ |P¹|, returns to a."""
    n = len(succ)
    out = []
    for a in range(n):
        b = succ[a]
        for _ in range(n):
            if b == a:
                out.append(True)
                break
            b = succ[b]
        else:
            out.append(False)
    return out


def naive_density(succ) -> Fraction:
    return Fraction(sum(naive_periodic(succ)), len(succ))


def naive_valuation(ell: int, k: int) -> int:
    k = abs(k)
    v = 0
    while k and k % ell == 0:
        k //= ell
        v += 1
    return v


def naive_supported_part(m: int, d: int) -> int:
    """Largest divisor of |m| whose prime factors all divide d."""
    m = abs(m)
    part = 1
    for ell in range(2, abs(d) + 1):
        if abs(d) % ell == 0 and all(ell % r for r in range(2, ell)):
            while m % ell == 0:
                m //= ell
                part *= ell
    return part
