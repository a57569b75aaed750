"""Small integer helpers: primality, factoring and ℓ-adic valuations.

Everything here is trial division; the integers that get factored are group
orders and Lattès degrees at desk scale.
"""

from __future__ import annotations

from math import lcm  # noqa: F401  re-exported


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Return the prime factorization of ``|n|`` as ``{prime: exponent}``."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing ``|n|``, ascending (empty for n = ±1)."""
    return sorted(factorize(n))


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power ``q = p**k`` into ``(p, k)``."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return p, k


def valuation(ell: int, k: int) -> int:
    """Exponent of the prime ``ell`` in the nonzero integer ``k``."""
    if k == 0:
        raise ValueError("valuation of 0 is undefined")
    if ell < 2:
        raise ValueError(f"{ell} is not a prime")
    k = abs(k)
    v = 0
    while k % ell == 0:
        k //= ell
        v += 1
    return v

