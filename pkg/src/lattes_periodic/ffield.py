"""Finite fields GF(p^k) and quadratic towers GF(q) ⊂ GF(q^2).

Every element is identified by an integer *code*: the coefficient vector
``(c0, c1, ...)`` over the ground field (GF(p), or the base of a tower) read
as ``c0 + c1*g + c2*g**2 + ...`` with ``g`` the ground field order.  Codes give
the canonical enumeration order and double as P¹ indices elsewhere in the
package.  In a tower the base field is exactly the codes below ``q``, so
embedding is the identity on codes.

Arithmetic on codes is dispatched to a backend picked by size: plain modular
arithmetic for prime fields, full addition/multiplication tables for small
fields, log/Zech tables for mid-size extension fields and polynomial
arithmetic beyond that.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .arith import factorize, is_prime

DEFAULT_MAX_Q = 1 << 16
TABLE_LIMIT = 256
LOG_TABLE_LIMIT = 1 << 16
SEARCH_LIMIT = 1 << 16


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


def max_field_order() -> int:
    """Desk-scale bound on field orders; ``LATTES_MAX_Q`` overrides it."""
    return int(os.environ.get("LATTES_MAX_Q", DEFAULT_MAX_Q))


# -- polynomials over GF(p), coefficient lists low degree first -------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _prem(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim(list(f))
    dg = len(g) - 1
    lead_inv = pow(g[-1], -1, p)
    while len(f) - 1 >= dg:
        c = f[-1] * lead_inv % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _pmulmod(f: list[int], g: list[int], m: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _prem(out, m, p)


def _ppowmod(f: list[int], n: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _prem(f, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _prem(f, g, p)
    return f


def is_irreducible(f: tuple[int, ...] | list[int], p: int) -> bool:
    """Irreducibility of a polynomial over GF(p) via gcd(f, x^(p^i) - x)."""
    f = _trim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    h = [0, 1]
    for _ in range(k // 2):
        h = _ppowmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


# -- arithmetic backends on codes --------------------------------------------

class _PrimeOps:
    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)


class _PolyOps:
    """GF(p)[x]/(modulus) on codes, schoolbook."""

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = len(modulus) - 1
        self.q = p ** self.k
        # x^k = -(m0 + m1 x + ... + m_{k-1} x^{k-1})
        self.red = [-c % p for c in modulus[:-1]]

    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def code(self, ds) -> int:
        v = 0
        for c in reversed(ds):
            v = v * self.p + c
        return v

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        return self.code([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        return self.code([-x % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p, k, red = self.p, self.k, self.red
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for top in range(2 * k - 2, k - 1, -1):
            c = prod[top] % p
            if c:
                base = top - k
                for i, r in enumerate(red):
                    prod[base + i] += c * r
        return self.code([c % p for c in prod[:k]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return _pow_codes(self, a, self.q - 2)


class _TowerOps:
    """GF(q)[x]/(x^2 + beta x + gamma) on codes a0 + q*a1."""

    def __init__(self, base_ops, q: int, beta: int, gamma: int):
        self.b = base_ops
        self.q = q
        self.beta = beta
        self.gamma = gamma

    def add(self, a, b):
        q, add = self.q, self.b.add
        a1, a0 = divmod(a, q)
        b1, b0 = divmod(b, q)
        return add(a0, b0) + q * add(a1, b1)

    def sub(self, a, b):
        q, sub = self.q, self.b.sub
        a1, a0 = divmod(a, q)
        b1, b0 = divmod(b, q)
        return sub(a0, b0) + q * sub(a1, b1)

    def neg(self, a):
        q, neg = self.q, self.b.neg
        a1, a0 = divmod(a, q)
        return neg(a0) + q * neg(a1)

    def mul(self, a, b):
        q = self.q
        add, sub, mul = self.b.add, self.b.sub, self.b.mul
        a1, a0 = divmod(a, q)
        b1, b0 = divmod(b, q)
        if not a1 and not b1:
            return mul(a0, b0)
        hi = mul(a1, b1)
        c0 = sub(mul(a0, b0), mul(self.gamma, hi))
        c1 = sub(add(mul(a0, b1), mul(a1, b0)), mul(self.beta, hi))
        return c0 + q * c1

    def inv(self, a):
        q = self.q
        add, sub, mul, neg = self.b.add, self.b.sub, self.b.mul, self.b.neg
        a1, a0 = divmod(a, q)
        if not a1:
            return self.b.inv(a0)
        norm = add(sub(mul(a0, a0), mul(self.beta, mul(a0, a1))), mul(self.gamma, mul(a1, a1)))
        ninv = self.b.inv(norm)
        return mul(sub(a0, mul(self.beta, a1)), ninv) + q * mul(neg(a1), ninv)


class _TableOps:
    def __init__(self, src, order: int):
        elems = range(order)
        self.add_t = [[src.add(a, b) for b in elems] for a in elems]
        self.mul_t = [[src.mul(a, b) for b in elems] for a in elems]
        self.neg_t = [src.neg(a) for a in elems]
        self.inv_t = [0] + [src.inv(a) for a in range(1, order)]

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.inv_t[a]


class _LogOps:
    """Discrete log tables with Zech logarithms for addition."""

    def __init__(self, src: _PolyOps):
        p, q = src.p, src.q
        m = q - 1
        self.m = m
        self.p = p
        g = _find_generator(src, q)
        exp = [1] * (2 * m + 1)
        log = [0] * q
        x = 1
        for i in range(m):
            exp[i] = x
            log[x] = i
            x = src.mul(x, g)
        for i in range(m, 2 * m + 1):
            exp[i] = exp[i - m]
        zech = [0] * m
        for i in range(m):
            v = exp[i]
            d0 = v % p
            w = v - d0 + (d0 + 1) % p
            zech[i] = log[w] if w else -1
        self.exp, self.log, self.zech = exp, log, zech
        self.half = m // 2

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % self.m]
        return 0 if z < 0 else self.exp[la + z]

    def neg(self, a):
        if self.p == 2 or not a:
            return a
        return self.exp[self.log[a] + self.half]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[self.m - self.log[a]]


def _pow_codes(ops, a: int, n: int) -> int:
    if n < 0:
        a, n = ops.inv(a), -n
    result = 1
    while n:
        if n & 1:
            result = ops.mul(result, a)
        a = ops.mul(a, a)
        n >>= 1
    return result


def _find_generator(ops, q: int) -> int:
    m = q - 1
    primes = list(factorize(m)) if m > 1 else []
    for g in range(1, q):
        if all(_pow_codes(ops, g, m // r) != 1 for r in primes):
            return g
    raise FieldError("no primitive element found")  # unreachable for a field


# -- field specs and elements ------------------------------------------------

@dataclass(frozen=True, eq=True)
class FieldSpec:
    """GF(p^k), either over GF(p) or as a degree-2 tower over ``base``.

    ``modulus`` holds the defining monic polynomial over the ground field
    (GF(p), or ``base`` for a tower) as codes, low degree first.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    base: FieldSpec | None = None

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def ground_order(self) -> int:
        return self.p if self.base is None else self.base.q

    @property
    def degree(self) -> int:
        """Degree over the ground field."""
        return len(self.modulus) - 1

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        return f"FieldSpec({format_field(self)})"

    @cached_property
    def ops(self):
        if self.base is None and self.k == 1:
            return _PrimeOps(self.p)
        if self.base is None:
            src = _PolyOps(self.p, self.modulus)
        else:
            src = _TowerOps(self.base.ops, self.base.q, self.modulus[1], self.modulus[0])
        if self.q <= TABLE_LIMIT:
            return _TableOps(src, self.q)
        if self.base is None and self.q <= LOG_TABLE_LIMIT:
            return _LogOps(src)
        return src

    # code-level arithmetic
    def add(self, a: int, b: int) -> int:
        return self.ops.add(a, b)

    def sub(self, a: int, b: int) -> int:
        return self.ops.sub(a, b)

    def neg(self, a: int) -> int:
        return self.ops.neg(a)

    def mul(self, a: int, b: int) -> int:
        return self.ops.mul(a, b)

    def inv(self, a: int) -> int:
        return self.ops.inv(a)

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if n == 0 else 0
        return _pow_codes(self.ops, a, n)

    def const(self, n: int) -> int:
        """Code of the prime-subfield constant ``n mod p``."""
        return n % self.p

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for GF({self.q})")
        return FieldElement(self, code)

    def __call__(self, n: int) -> FieldElement:
        return FieldElement(self, self.const(n))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def digits(self, code: int) -> tuple[int, ...]:
        """Ground-field coefficient codes of an element, low degree first."""
        g = self.ground_order
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, g)
            out.append(r)
        return tuple(out)

    # square roots and Artin-Schreier roots on codes
    @cached_property
    def _root_table(self) -> dict[int, int]:
        table: dict[int, int] = {}
        # descending, so the smallest root of each value wins
        for y in range(self.q - 1, -1, -1):
            if self.p == 2:
                table[self.add(self.mul(y, y), y)] = y
            else:
                table[self.mul(y, y)] = y
        return table

    def _searchable(self) -> bool:
        return self.base is None or self.q <= SEARCH_LIMIT

    def sqrt(self, a: int) -> int | None:
        """Some square root of ``a`` (the smallest when found by search), or None."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if self._searchable():
            return self._root_table.get(a)
        return self._tower_sqrt(a)

    def _tower_sqrt(self, a: int) -> int | None:
        base, q = self.base, self.base.q
        gamma, beta = self.modulus[0], self.modulus[1]
        if beta != 0:
            raise FieldError("tower square roots need a modulus x^2 + gamma")
        r = base.neg(gamma)  # x^2 = r, a non-square of the base
        a1, a0 = divmod(a, q)
        if a1 == 0:
            s = base.sqrt(a0)
            if s is not None:
                return s
            return q * base.sqrt(base.mul(a0, base.inv(r)))
        norm = base.sub(base.mul(a0, a0), base.mul(r, base.mul(a1, a1)))
        n = base.sqrt(norm)
        if n is None:
            return None
        half = base.inv(base.const(2))
        for sign in (n, base.neg(n)):
            s0 = base.sqrt(base.mul(base.add(a0, sign), half))
            if s0:
                s1 = base.mul(a1, base.inv(base.mul(base.const(2), s0)))
                return s0 + q * s1
        return None

    def artin_schreier_root(self, t: int) -> int | None:
        """Some ``z`` with ``z^2 + z = t`` in characteristic 2, or None."""
        if self.p != 2:
            raise FieldError("Artin-Schreier roots are a characteristic-2 tool")
        if self._searchable():
            return self._root_table.get(t)
        base, q = self.base, self.base.q
        gamma = self.modulus[0]
        t1, t0 = divmod(t, q)
        z1 = base.artin_schreier_root(t1)
        if z1 is None:
            return None
        for cand in (z1, base.add(z1, 1)):
            z0 = base.artin_schreier_root(base.add(t0, base.mul(gamma, base.mul(cand, cand))))
            if z0 is not None:
                return z0 + q * cand
        return None

    def quadratic_roots(self, c2: int, c1: int, c0: int) -> list[int]:
        """Roots of ``c2 y^2 + c1 y + c0`` as sorted codes."""
        if c2 == 0:
            raise FieldError("leading coefficient is zero (linear equation)")
        i = self.inv(c2)
        b, c = self.mul(c1, i), self.mul(c0, i)
        if self.p == 2:
            if b == 0:
                return [self.sqrt(c)]
            t = self.mul(c, self.inv(self.mul(b, b)))
            z = self.artin_schreier_root(t)
            if z is None:
                return []
            return sorted({self.mul(b, z), self.mul(b, self.add(z, 1))})
        disc = self.sub(self.mul(b, b), self.mul(self.const(4), c))
        s = self.sqrt(disc)
        if s is None:
            return []
        half = self.inv(self.const(2))
        nb = self.neg(b)
        return sorted({self.mul(self.add(nb, s), half), self.mul(self.sub(nb, s), half)})

    def frobenius_code(self, a: int, q0: int) -> int:
        if self.base is not None and q0 == self.base.q:
            q = q0
            a1, a0 = divmod(a, q)
            base, beta = self.base, self.modulus[1]
            return base.sub(a0, base.mul(beta, a1)) + q * base.neg(a1)
        return self.pow(a, q0)


class FieldElement:
    """Immutable element of a :class:`FieldSpec`, identified by its code."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple:
        """Coefficients over GF(p) (ints) or, for a tower, over the base."""
        ds = self.spec.digits(self.value)
        if self.spec.base is None:
            return ds
        return tuple(FieldElement(self.spec.base, d) for d in ds)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldError(f"mixed fields {self.spec} and {other.spec}")
            return other.value
        if isinstance(other, int):
            return self.spec.const(other)
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.spec, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.spec.mul(self.value, self.spec.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.spec.mul(o, self.spec.inv(self.value)))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __pow__(self, n: int):
        return self._wrap(self.spec.pow(self.value, n))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and (other.spec is self.spec or other.spec == self.spec)
        if isinstance(other, int):
            return self.value == self.spec.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.q, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.spec.q})({format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)


# -- construction ------------------------------------------------------------

def _check_bound(order: int, bound: int) -> None:
    if order > bound:
        raise FieldError(f"field order {order} exceeds desk-scale bound {bound} (set LATTES_MAX_Q)")


def make_field(p: int, k: int = 1) -> FieldSpec:
    """GF(p^k) with the smallest monic irreducible modulus in code order."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be positive")
    _check_bound(p ** k, max_field_order())
    return _make_field(p, k)


@functools.lru_cache(maxsize=None)
def _make_field(p: int, k: int) -> FieldSpec:
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        if low[0] and is_irreducible(low + [1], p):
            return FieldSpec(p, k, tuple(low) + (1,))
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


def field_with_modulus(p: int, modulus: tuple[int, ...] | list[int]) -> FieldSpec:
    """GF(p^k) defined by an explicit monic irreducible modulus (low degree first)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    mod = tuple(c % p for c in modulus)
    k = len(mod) - 1
    if k < 1 or mod[-1] != 1:
        raise FieldError("modulus must be monic of positive degree")
    if not is_irreducible(mod, p):
        raise FieldError(f"modulus {list(mod)} is reducible over GF({p})")
    _check_bound(p ** k, max_field_order())
    if k == 1:
        return _make_field(p, 1)
    return _intern(FieldSpec(p, k, mod))


@functools.lru_cache(maxsize=None)
def _intern(spec: FieldSpec) -> FieldSpec:
    return spec


def quadratic_ext(spec: FieldSpec) -> FieldSpec:
    """GF(q^2) as a tower over ``spec`` with the smallest irreducible x^2 + βx + γ."""
    _check_bound(spec.q, max_field_order())
    return _quadratic_ext(spec)


@functools.lru_cache(maxsize=None)
def _quadratic_ext(spec: FieldSpec) -> FieldSpec:
    q = spec.q
    for code in range(q * q):
        beta, gamma = divmod(code, q)
        if not spec.quadratic_roots(1, beta, gamma):
            return FieldSpec(spec.p, 2 * spec.k, (gamma, beta, 1), base=spec)
    raise FieldError(f"no irreducible quadratic over GF({q})")


def embed(a: FieldElement, ext: FieldSpec) -> FieldElement:
    """Image of ``a`` under the inclusion of ``a.spec`` into the tower ``ext``."""
    if ext == a.spec:
        return a
    if ext.base != a.spec:
        raise FieldError(f"{ext} is not a quadratic tower over {a.spec}")
    return FieldElement(ext, a.value)


def restrict(a: FieldElement) -> FieldElement:
    """Inverse of :func:`embed` for tower elements lying in the base field."""
    base = a.spec.base
    if base is None:
        raise FieldError("not a tower element")
    if a.value >= base.q:
        raise FieldError(f"{a} does not lie in the base field GF({base.q})")
    return FieldElement(base, a.value)


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, v) for v in range(spec.q)]


def iter_field(spec: FieldSpec) -> Iterator[FieldElement]:
    return (FieldElement(spec, v) for v in range(spec.q))


def solve_quadratic(c2: FieldElement, c1: FieldElement, c0: FieldElement,
                    spec: FieldSpec | None = None) -> list[FieldElement]:
    """Roots of ``c2*y^2 + c1*y + c0`` in ``spec``, in canonical order."""
    spec = spec or c2.spec
    codes = [_code_in(x, spec) for x in (c2, c1, c0)]
    return [FieldElement(spec, r) for r in spec.quadratic_roots(*codes)]


def _code_in(x, spec: FieldSpec) -> int:
    if isinstance(x, int):
        return spec.const(x)
    if x.spec == spec:
        return x.value
    return embed(x, spec).value


def frobenius(a: FieldElement, q0: int) -> FieldElement:
    """``a ** q0`` where ``q0`` is a power of the characteristic."""
    p = a.spec.p
    n = q0
    while n > 1 and n % p == 0:
        n //= p
    if n != 1:
        raise FieldError(f"{q0} is not a power of the characteristic {p}")
    return FieldElement(a.spec, a.spec.frobenius_code(a.value, q0))


# -- text forms ----------------------------------------------------------------

_FIELD_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:/\s*([-\d,\s]+))?\s*$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``p``, ``p^k`` or ``p^k/m0,m1,...,mk``.

    A bare prime power such as ``9`` is accepted as shorthand for ``3^2``.
    """
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"bad field spec {text!r}")
    base, exp, mod = m.group(1), m.group(2), m.group(3)
    p = int(base)
    k = int(exp) if exp else 1
    if not exp and not mod and not is_prime(p):
        fac = factorize(p) if p > 1 else {}
        if len(fac) != 1:
            raise FieldError(f"{p} is not a prime power")
        ((p, k),) = fac.items()
    if mod is not None:
        coeffs = [int(c) for c in mod.split(",") if c.strip()]
        if len(coeffs) != k + 1:
            raise FieldError(f"modulus for degree {k} needs {k + 1} coefficients")
        return field_with_modulus(p, coeffs)
    return make_field(p, k)


def format_field(spec: FieldSpec) -> str:
    if spec.k == 1:
        return str(spec.p)
    text = f"{spec.p}^{spec.k}"
    if spec.base is None and _make_field(spec.p, spec.k).modulus != spec.modulus:
        text += "/" + ",".join(str(c) for c in spec.modulus)
    return text


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside square brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise FieldError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise FieldError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return [s.strip() for s in parts]


def parse_element(text: str, spec: FieldSpec) -> FieldElement:
    """Integer (a prime-subfield constant, negatives reduced) or ``[c0,c1,...]``."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise FieldError(f"bad element {text!r}")
        items = split_top_level(text[1:-1])
        if len(items) > spec.degree:
            raise FieldError(f"too many coefficients in {text!r} for GF({spec.q})")
        g = spec.ground_order
        code = 0
        for i, item in enumerate(items):
            if spec.base is None:
                try:
                    c = int(item) % spec.p
                except ValueError:
                    raise FieldError(f"bad coefficient {item!r}") from None
            else:
                c = parse_element(item, spec.base).value
            code += c * g ** i
        return FieldElement(spec, code)
    try:
        return spec(int(text))
    except ValueError:
        raise FieldError(f"bad element {text!r}") from None


def format_element(a: FieldElement) -> str:
    spec = a.spec
    if spec.k == 1:
        return str(a.value)
    if spec.base is None:
        return "[" + ",".join(str(c) for c in spec.digits(a.value)) + "]"
    return "[" + ",".join(format_element(c) for c in a.coeffs) + "]"
