"""Closed-form periodic-point densities of Lattès maps.

For E/GF(q) with trace τ and d coprime to q, the density of periodic points
of L_d on P¹(GF(q)) is

    δ = (1/π+ + 1/π-)/2 + τ/(2(q+1)) · (1/π+ - 1/π-),

where π± is the d-supported part of q + 1 ± τ.  Everything here is exact
rational arithmetic over Python integers; nothing is ever rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .arith import is_prime, lcm, prime_factors, valuation
from .curve import TraceData, trace_sequence

__all__ = [
    "DensityError",
    "DensityReport",
    "SupersingularReport",
    "TowerReport",
    "TowerSample",
    "check_valuation_lemma",
    "delta_formula",
    "delta_supersingular",
    "delta_tower",
    "gap_bound_holds",
    "is_permutation_formula",
    "mult_order_mod",
    "pi_pm",
    "supersingular_trace",
    "tower_limit",
    "valuation",
]


class DensityError(ValueError):
    pass


def _check_inputs(q_n: int, tau_n: int, d: int) -> None:
    if d == 0:
        raise DensityError("d must be nonzero")
    if math.gcd(d, q_n) != 1:
        raise DensityError(f"d={d} is not coprime to q={q_n}")
    if tau_n * tau_n > 4 * q_n:
        raise DensityError(f"Hasse bound violated: tau={tau_n}, q={q_n}")


def pi_pm(q_n: int, tau_n: int, d: int) -> tuple[int, int]:
    """(π+, π-): the parts of q+1+τ and q+1-τ supported on primes dividing d."""
    if d == 0:
        raise DensityError("d must be nonzero")
    plus, minus = q_n + 1 + tau_n, q_n + 1 - tau_n
    pp = pm = 1
    for ell in prime_factors(d):
        pp *= ell ** valuation(ell, plus)
        pm *= ell ** valuation(ell, minus)
    return pp, pm


def _mean_term(pp: int, pm: int) -> Fraction:
    return Fraction(1, 2) * (Fraction(1, pp) + Fraction(1, pm))


def delta_formula(q_n: int, tau_n: int, d: int) -> Fraction:
    _check_inputs(q_n, tau_n, d)
    pp, pm = pi_pm(q_n, tau_n, d)
    delta = _mean_term(pp, pm) + Fraction(tau_n, 2 * (q_n + 1)) * (Fraction(1, pp) - Fraction(1, pm))
    if not 0 < delta <= 1 or (delta * (q_n + 1)).denominator != 1:
        raise DensityError(f"inconsistent density {delta} for q={q_n}, tau={tau_n}, d={d}")
    return delta


def gap_bound_holds(q_n: int, tau_n: int, d: int) -> bool:
    """|δ - (1/π+ + 1/π-)/2| < 1/(√q + 1/√q), checked as gap²(q+1)² < q."""
    pp, pm = pi_pm(q_n, tau_n, d)
    gap = delta_formula(q_n, tau_n, d) - _mean_term(pp, pm)
    return gap * gap * (q_n + 1) ** 2 < q_n


def is_permutation_formula(q_n: int, tau_n: int, d: int) -> bool:
    return math.gcd((q_n + 1) ** 2 - tau_n ** 2, d) == 1


@dataclass(frozen=True)
class DensityReport:
    q: int
    n: int
    tau_n: int
    d: int
    pi_plus: int
    pi_minus: int
    delta: Fraction
    per_count: int
    permutation: bool
    gap_ok: bool

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "tau_n": str(self.tau_n),
            "d": self.d,
            "pi_plus": self.pi_plus,
            "pi_minus": self.pi_minus,
            "delta": {"num": self.delta.numerator, "den": self.delta.denominator},
            "per_count": self.per_count,
            "permutation": self.permutation,
            "gap_ok": self.gap_ok,
        }

    def to_row(self) -> dict:
        row = self.to_dict()
        row["delta"] = _frac(self.delta)
        return row


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def delta_tower(td: TraceData, d: int, n: int) -> DensityReport:
    """Density of L_d on P¹(GF(q^n)) for the curve with trace data ``td``."""
    if n < 1:
        raise DensityError("n must be at least 1")
    q_n = td.q ** n
    tau_n = trace_sequence(td, n)
    delta = delta_formula(q_n, tau_n, d)
    pp, pm = pi_pm(q_n, tau_n, d)
    per = delta * (q_n + 1)
    return DensityReport(
        q=td.q, n=n, tau_n=tau_n, d=d, pi_plus=pp, pi_minus=pm, delta=delta,
        per_count=per.numerator, permutation=is_permutation_formula(q_n, tau_n, d),
        gap_ok=gap_bound_holds(q_n, tau_n, d),
    )


# -- towers ----------------------------------------------------------------------

@dataclass(frozen=True)
class TowerSample:
    m: int
    delta: Fraction
    valuations_match: bool
    gap_ok: bool


@dataclass(frozen=True)
class TowerReport:
    """Empirical stabilization of δ(L_d, q^m) along m ≡ n (mod c·d^N).

    ``N_emp`` is None when no N up to the cap stabilized within the window.
    """

    n: int
    c: int
    N_emp: int | None
    limit: Fraction
    samples: list[TowerSample] = field(default_factory=list)
    step: int | None = None  # c·|d|^N_emp

    @property
    def stabilized(self) -> bool:
        return self.N_emp is not None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "N_emp": self.N_emp,
            "step": self.step,
            "limit": {"num": self.limit.numerator, "den": self.limit.denominator},
            "samples": [
                {"m": s.m, "delta": {"num": s.delta.numerator, "den": s.delta.denominator},
                 "valuations_match": s.valuations_match, "gap_ok": s.gap_ok}
                for s in self.samples
            ],
        }


def _squared_gap_ok(delta: Fraction, limit: Fraction, q_m: int) -> bool:
    gap = delta - limit
    return gap * gap * (q_m + 1) ** 2 < q_m


def tower_limit(td: TraceData, d: int, n: int, m_max: int = 400, N_cap: int = 8) -> TowerReport:
    """Search the least N ≤ N_cap whose progression m ≡ n (mod c·d^N), m ≤ m_max,
    keeps every ℓ-adic valuation of q^m + 1 ± τ_m equal to its value at m = n.

    A progression holding only m = n itself proves nothing, so at least one
    further sample is required.
    """
    if n < 1:
        raise DensityError("n must be at least 1")
    _check_inputs(td.q, td.tau, d)
    primes = prime_factors(d)
    c = lcm(*(ell * ell - 1 for ell in primes))

    taus = [2, td.tau]
    for _ in range(2, max(m_max, n) + 1):
        taus.append(td.tau * taus[-1] - td.q * taus[-2])

    def vals(m: int) -> tuple[int, ...]:
        qm = td.q ** m
        return tuple(valuation(ell, qm + 1 + s * taus[m]) for ell in primes for s in (1, -1))

    target = vals(n)
    pp, pm = pi_pm(td.q ** n, taus[n], d)
    limit = _mean_term(pp, pm)

    def sample(m: int) -> TowerSample:
        q_m = td.q ** m
        delta = delta_formula(q_m, taus[m], d)
        return TowerSample(m, delta, vals(m) == target, _squared_gap_ok(delta, limit, q_m))

    samples: list[TowerSample] = []
    for N in range(N_cap + 1):
        step = c * abs(d) ** N
        ms = range(n, max(m_max, n) + 1, step)
        samples = [sample(m) for m in ms]
        if len(samples) >= 2 and all(s.valuations_match for s in samples):
            return TowerReport(n, c, N, limit, samples, step=step)
    return TowerReport(n, c, None, limit, samples)


# -- the τ = 0 family ------------------------------------------------------------

def mult_order_mod(q: int, ell: int) -> int:
    """Least e ≥ 1 with q^e ≡ 1 (mod ℓ)."""
    if ell < 2 or math.gcd(q, ell) != 1:
        raise DensityError(f"q={q} is not a unit modulo {ell}")
    e, x = 1, q % ell
    while x != 1 % ell:
        x = x * q % ell
        e += 1
    return e


def check_valuation_lemma(q: int, ell: int, n_range: Iterable[int] | int) -> bool:
    """v_ℓ(q^n - 1) = v_ℓ(q - 1) + v_ℓ(n) for every n in range (ℓ odd, q ≡ 1 mod ℓ)."""
    if ell == 2 or not is_prime(ell):
        raise DensityError(f"ℓ={ell} must be an odd prime")
    if q % ell != 1:
        raise DensityError(f"q={q} is not 1 modulo {ell}")
    if isinstance(n_range, int):
        n_range = range(1, n_range + 1)
    base = valuation(ell, q - 1)
    return all(valuation(ell, q ** n - 1) == base + valuation(ell, n) for n in n_range)


def supersingular_trace(q: int, n: int) -> int:
    """τ_n of a curve with τ = 0 over GF(q)."""
    if n % 2:
        return 0
    return 2 * (-1) ** (n // 2) * q ** (n // 2)


@dataclass(frozen=True)
class SupersingularReport:
    q: int
    n: int
    ell: int
    e: int
    w_n: int
    epsilon: int | None
    delta: Fraction
    branch: str
    paper_epsilon: int | None
    paper_delta: Fraction

    @property
    def paper_divergent(self) -> bool:
        return self.paper_delta != self.delta

    @property
    def paper_integral(self) -> bool:
        return (self.paper_delta * (self.q ** self.n + 1)).denominator == 1

    def to_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n, "ell": self.ell, "e": self.e, "w_n": self.w_n,
            "epsilon": self.epsilon, "branch": self.branch,
            "delta": {"num": self.delta.numerator, "den": self.delta.denominator},
            "paper_epsilon": self.paper_epsilon,
            "paper_delta": {"num": self.paper_delta.numerator, "den": self.paper_delta.denominator},
            "paper_divergent": self.paper_divergent,
            "paper_integral": self.paper_integral,
        }


BRANCH_ODD = "odd: e | 2n, e ∤ n"
BRANCH_EVEN = "even: e | n"
BRANCH_OTHER = "otherwise"


def _printed_epsilon(n: int, e: int) -> int:
    half_divisible = (n // 2) % e == 0
    if n % 4 == 2:
        return -1 if half_divisible else 1
    return 1 if half_divisible else -1


def delta_supersingular(q: int, ell: int, n: int) -> SupersingularReport:
    """δ(L_ℓ, q^n) for a curve with τ = 0 over GF(q), by the three-branch rule.

    The sign in the even branch is +1 exactly when e | n/2; the result is
    cross-checked against :func:`delta_formula` with the τ = 0 trace sequence.
    ``paper_epsilon``/``paper_delta`` record the sign table as printed, which
    disagrees when n ≡ 2 (mod 4).
    """
    if ell == 2 or not is_prime(ell):
        raise DensityError(f"ℓ={ell} must be an odd prime")
    if q % ell == 0:
        raise DensityError(f"ℓ={ell} divides q={q}")
    if n < 1:
        raise DensityError("n must be at least 1")
    e = mult_order_mod(q, ell)
    w = valuation(ell, q ** e - 1) + valuation(ell, n)
    lw2 = Fraction(1, ell ** (2 * w))
    epsilon = paper_eps = None
    if n % 2 and (2 * n) % e == 0 and n % e:
        branch, delta = BRANCH_ODD, Fraction(1, ell ** w)
        paper_delta = delta
    elif n % 2 == 0 and n % e == 0:
        branch = BRANCH_EVEN
        epsilon = 1 if (n // 2) % e == 0 else -1
        paper_eps = _printed_epsilon(n, e)
        root = q ** (n // 2)
        scale = Fraction(root, root * root + 1)  # 1/(q^{n/2} + q^{-n/2})
        delta = Fraction(1, 2) * (1 + lw2) + epsilon * scale * (1 - lw2)
        paper_delta = Fraction(1, 2) * (1 + lw2) + paper_eps * scale * (1 - lw2)
    else:
        branch, delta = BRANCH_OTHER, Fraction(1)
        paper_delta = delta
    check = delta_formula(q ** n, supersingular_trace(q, n), ell)
    if check != delta:
        raise DensityError(f"τ=0 rule gives {delta} but the general formula gives {check} "
                           f"for q={q}, ℓ={ell}, n={n}")
    return SupersingularReport(q, n, ell, e, w, epsilon, delta, branch, paper_eps, paper_delta)
