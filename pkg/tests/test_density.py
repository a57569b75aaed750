import json
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lattes_periodic.arith import is_prime
from lattes_periodic.curve import TraceData, base_change, parse_curve, trace, trace_sequence
from lattes_periodic.density import (
    BRANCH_EVEN,
    BRANCH_ODD,
    BRANCH_OTHER,
    DensityError,
    check_valuation_lemma,
    delta_formula,
    delta_supersingular,
    delta_tower,
    gap_bound_holds,
    is_permutation_formula,
    mult_order_mod,
    pi_pm,
    supersingular_trace,
    tower_limit,
)
from lattes_periodic.ffield import make_field
from lattes_periodic.lattes import LattesMap, lattes_table, oracle_density

from oracles import naive_supported_part, naive_valuation

E5 = parse_curve("5:0,0,0,1,1")
PRIME_POWERS = [q for q in range(2, 2000) if any(
    is_prime(p) and p ** k == q for p in range(2, q + 1) for k in range(1, 12) if p ** k <= q)]


@st.composite
def formula_inputs(draw):
    q = draw(st.sampled_from(PRIME_POWERS))
    bound = math.isqrt(4 * q)
    tau = draw(st.integers(-bound, bound))
    d = draw(st.integers(-60, 60).filter(lambda d: d != 0))
    assume(math.gcd(d, q) == 1)
    return q, tau, d


def _per_count_route(q, tau, d):
    # eigenspace sizes divided by their d-parts, averaged over the 2-to-1 projection
    pp, pm = naive_supported_part(q + 1 + tau, d), naive_supported_part(q + 1 - tau, d)
    return Fraction((q + 1 - tau) // pm + (q + 1 + tau) // pp, 2)


@settings(max_examples=600, deadline=None)
@given(formula_inputs())
def test_formula_against_count_route(inp):
    q, tau, d = inp
    delta = delta_formula(q, tau, d)
    assert delta * (q + 1) == _per_count_route(q, tau, d)
    assert pi_pm(q, tau, d) == (naive_supported_part(q + 1 + tau, d), naive_supported_part(q + 1 - tau, d))
    assert 0 < delta <= 1


@settings(max_examples=600, deadline=None)
@given(formula_inputs())
def test_formula_invariants(inp):
    q, tau, d = inp
    delta = delta_formula(q, tau, d)
    assert gap_bound_holds(q, tau, d)
    assert delta_formula(q, tau, -d) == delta
    # only the primes of d matter
    rad = math.prod({p for p in range(2, abs(d) + 1) if abs(d) % p == 0 and is_prime(p)})
    assert delta_formula(q, tau, rad) == delta
    assert is_permutation_formula(q, tau, d) == (delta == 1)


def test_d_one_is_identity():
    for q, tau in ((5, -3), (7, 0), (4, 4), (9, -6)):
        assert delta_formula(q, tau, 1) == 1
        assert is_permutation_formula(q, tau, 1)


def test_input_validation():
    with pytest.raises(DensityError):
        delta_formula(5, -3, 10)
    with pytest.raises(DensityError):
        delta_formula(5, 5, 3)
    with pytest.raises(DensityError):
        delta_formula(5, -3, 0)
    with pytest.raises(DensityError):
        pi_pm(5, -3, 0)
    with pytest.raises(DensityError):
        delta_tower(TraceData(5, -3), 3, 0)


# -- frozen values -----------------------------------------------------------------------------
# each is also reproduced by brute force over P¹ of the stated field

def test_frozen_formula_values():
    assert delta_formula(49, -14, 3) == Fraction(17, 25)
    assert delta_formula(5, 0, 3) == Fraction(1, 3)
    assert delta_formula(25, -10, 3) == Fraction(5, 13)


def test_tower_density_over_gf25():
    # the value 1/2 is confirmed on the 26 points of P¹(GF(25))
    rep = delta_tower(trace(E5), 3, 2)
    assert rep.tau_n == -1 and rep.delta == Fraction(1, 2)
    lmap = LattesMap(base_change(E5, make_field(5, 2)), 3)
    assert oracle_density(lmap) == Fraction(1, 2)
    assert rep.per_count == 13 == sum(lattes_table(lmap).periodic)


def test_density_report_serialization():
    rep = delta_tower(trace(E5), 3, 1)
    d = rep.to_dict()
    assert list(d) == ["q", "n", "tau_n", "d", "pi_plus", "pi_minus", "delta", "per_count",
                       "permutation", "gap_ok"]
    assert d["tau_n"] == "-3" and d["delta"] == {"num": 1, "den": 6}
    assert json.loads(json.dumps(d)) == d
    assert rep.to_row()["delta"] == "1/6"
    big = delta_tower(TraceData(7, -3), 2, 40).to_dict()
    assert int(big["tau_n"]) == trace_sequence(TraceData(7, -3), 40)


# -- towers ---------------------------------------------------------------------------------------

def test_tower_limit_gf5():
    rep = tower_limit(trace(E5), 3, 1)
    assert rep.stabilized and rep.N_emp <= 8
    assert rep.c == 8 and rep.limit == Fraction(2, 9)
    assert rep.step == rep.c * 3 ** rep.N_emp
    assert all(s.valuations_match and s.gap_ok for s in rep.samples)
    assert [s.m for s in rep.samples] == list(range(1, 401, rep.step))
    assert rep.to_dict()["limit"] == {"num": 2, "den": 9}


def test_tower_limit_trivial_and_supersingular():
    rep = tower_limit(trace(E5), 1, 1)
    assert rep.limit == 1 and rep.N_emp == 0
    ss = parse_curve("7:0,0,0,1,0")
    assert trace(ss).tau == 0
    assert tower_limit(trace(ss), 3, 2).limit == Fraction(5, 9)


def test_tower_cap_reports_failure():
    rep = tower_limit(trace(E5), 3, 1, m_max=3, N_cap=1)
    assert not rep.stabilized and rep.to_dict()["N_emp"] is None


def test_tower_samples_approach_limit():
    rep = tower_limit(TraceData(7, 1), 5, 1)
    gaps = [abs(s.delta - rep.limit) for s in rep.samples]
    assert gaps[-1] < Fraction(1, 10 ** 20)


# -- valuations and the τ = 0 family ----------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 40), st.integers(1, 60))
def test_valuation_lemma_property(ell, mult, n):
    q = ell * mult + 1
    assert check_valuation_lemma(q, ell, [n])
    assert naive_valuation(ell, q ** n - 1) == naive_valuation(ell, q - 1) + naive_valuation(ell, n)


def test_valuation_lemma_rejects():
    with pytest.raises(DensityError):
        check_valuation_lemma(5, 2, 10)
    with pytest.raises(DensityError):
        check_valuation_lemma(5, 3, 10)


def test_mult_order():
    assert mult_order_mod(5, 3) == 2
    assert mult_order_mod(7, 5) == 4
    assert mult_order_mod(11, 7) == 3
    with pytest.raises(DensityError):
        mult_order_mod(6, 3)


def test_supersingular_trace_sequence():
    for q in (5, 7, 11, 4):
        td = TraceData(q, 0)
        for n in range(1, 30):
            assert supersingular_trace(q, n) == trace_sequence(td, n)


@pytest.mark.parametrize("q,ell,n,delta,branch", [
    (5, 3, 1, Fraction(1, 3), BRANCH_ODD),
    (7, 5, 1, Fraction(1), BRANCH_OTHER),
    (5, 3, 2, Fraction(5, 13), BRANCH_EVEN),
    (7, 3, 2, Fraction(17, 25), BRANCH_EVEN),
])
def test_supersingular_examples(q, ell, n, delta, branch):
    rep = delta_supersingular(q, ell, n)
    assert rep.delta == delta and rep.branch == branch


def test_printed_sign_discrepancy():
    rep = delta_supersingular(5, 3, 2)
    assert rep.epsilon == -1 and rep.paper_epsilon == 1
    assert rep.paper_delta == Fraction(85, 117)
    assert rep.paper_divergent and not rep.paper_integral
    # n ≡ 0 (mod 4) rows agree with the printed table
    rep4 = delta_supersingular(5, 3, 4)
    assert rep4.epsilon == rep4.paper_epsilon == 1 and not rep4.paper_divergent


@pytest.mark.parametrize("q", [5, 7, 11, 13, 4, 8, 23])
def test_supersingular_matches_general_formula(q):
    for ell in (3, 5, 7, 11, 13):
        if q % ell == 0:
            continue
        for n in range(1, 25):
            rep = delta_supersingular(q, ell, n)
            assert rep.delta == delta_formula(q ** n, supersingular_trace(q, n), ell)
            assert (rep.delta == 1) == (rep.branch == BRANCH_OTHER)
            if 2 * n % rep.e:
                assert rep.delta == 1


def test_supersingular_rejects():
    for args in ((5, 2, 1), (5, 9, 1), (9, 3, 1), (5, 3, 0)):
        with pytest.raises(DensityError):
            delta_supersingular(*args)
