import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lsb
from lsb2adic.autocorr import AcProfile, ac_profile
from lsb2adic.errors import InvalidArgument, ResourceLimit, UnsupportedPrime
from lsb2adic.seq import BinarySequence
from lsb2adic.twoadic import (
    BOUNDS,
    SUPPORTED,
    _fold,
    _mod_mersenne,
    bound_formula,
    conjecture_check,
    conjecture_main,
    exact_phi2,
    g_full,
    gcd_halves,
    hu_congruence_check,
    hu_sides,
    predicted_gcd,
    predicted_gcd_halves,
    s_of_two,
    t_inverse_mod,
    theorem_bound,
    two_adic_report,
)

bit_vectors = st.lists(st.integers(0, 1), min_size=2, max_size=120)
even_vectors = bit_vectors.filter(lambda b: len(b) % 2 == 0)


def seq_of(bits):
    return BinarySequence.from_bits(bits)


def t_inverse_oracle(bits):
    N = len(bits)
    m = (1 << N) - 1
    inv2 = pow(2, -1, m)
    return sum((1 - 2 * b) * pow(inv2, t, m) for t, b in enumerate(bits)) % m


def phi2_oracle(bits):
    N = len(bits)
    S = sum(b << t for t, b in enumerate(bits))
    q = Fraction(S, (1 << N) - 1).denominator
    return q.bit_length() - 1


# -- evaluations -------------------------------------------------------------------


def test_s_of_two_examples():
    assert s_of_two(seq_of([1, 1, 0, 0, 0, 1])) == 35
    assert s_of_two(seq_of([0] * 9 + [1])) == 512


@given(bit_vectors)
def test_t_inverse_matches_oracle(bits):
    assert t_inverse_mod(seq_of(bits)) == t_inverse_oracle(bits)


def test_t_inverse_rejects_period_one():
    with pytest.raises(InvalidArgument):
        t_inverse_mod(seq_of([1]))


@given(st.integers(0, 1 << 400), st.integers(1, 90))
def test_mod_mersenne(x, N):
    assert _mod_mersenne(x, N) == x % ((1 << N) - 1)


@given(st.integers(0, 1 << 400), st.integers(1, 90), st.sampled_from([1, -1]))
def test_fold(x, h, sign):
    mod = (1 << h) + sign
    if mod > 1:
        assert _fold(x, h, sign) == x % mod


# -- correlation congruence ---------------------------------------------------------


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (7, 2), (11, 2), (3, 4), (13, 2)])
def test_hu_congruence_lsb(p, n):
    s = lsb(p, n)
    assert hu_congruence_check(s, ac_profile(s))


@given(bit_vectors)
def test_hu_congruence_random(bits):
    s = seq_of(bits)
    assert hu_congruence_check(s, ac_profile(s))


def test_hu_congruence_detects_wrong_profile():
    s = lsb(7, 2)
    prof = ac_profile(s)
    vals = prof.values.copy()
    vals[5] += 2
    lhs, rhs = hu_sides(s, AcProfile(prof.N, vals))
    assert lhs != rhs
    with pytest.raises(InvalidArgument):
        hu_sides(s, ac_profile(lsb(3, 2)))


# -- exact complexity and gcds --------------------------------------------------------


def test_exact_phi2_examples():
    assert exact_phi2(lsb(3, 2)) == 7
    assert exact_phi2(lsb(7, 2)) == 31
    assert exact_phi2(seq_of([1] * 6)) == 0  # S(2) = 2^N - 1
    assert exact_phi2(seq_of([1, 0, 1, 0])) == 1  # 5/15 = 1/3


@given(bit_vectors)
def test_exact_phi2_matches_oracle(bits):
    assert exact_phi2(seq_of(bits)) == phi2_oracle(bits)


def test_bit_budget():
    s = lsb(7, 3)
    for f in (exact_phi2, g_full, gcd_halves):
        with pytest.raises(ResourceLimit):
            f(s, max_bits=100)


@given(even_vectors)
def test_gcd_halves_match_direct(bits):
    s = seq_of(bits)
    N = len(bits)
    h = N // 2
    prod = s_of_two(s) * t_inverse_oracle(bits)
    plus, minus = gcd_halves(s)
    assert plus == math.gcd(prod, (1 << h) + 1)
    assert minus == math.gcd(prod, (1 << h) - 1)
    # the halves are coprime, so they split the full gcd
    assert plus * minus == g_full(s)


def test_gcd_halves_rejects_odd_period():
    with pytest.raises(InvalidArgument):
        gcd_halves(seq_of([1, 0, 0]))


# -- predicted gcds --------------------------------------------------------------------


def test_predicted_gcd_examples():
    assert predicted_gcd(3, 2) == 1
    M = 2801
    assert predicted_gcd(7, 5) == (1 << 2 * M) + (1 << M) + 1
    assert predicted_gcd(7, 5, M) == predicted_gcd(7, 5)
    M = 18
    assert predicted_gcd(17, 2) == ((1 << 8 * M) - 1) // ((1 << M) - 1)


def test_predicted_gcd_errors():
    with pytest.raises(UnsupportedPrime):
        predicted_gcd(13, 2)
    with pytest.raises(InvalidArgument):
        predicted_gcd_halves(7, 1)
    with pytest.raises(InvalidArgument):
        predicted_gcd(7, 2, M=7)


@pytest.mark.parametrize("p,n,beta", [(3, 2, None), (3, 3, None), (3, 4, None), (3, 5, None),
                                      (5, 2, None), (5, 3, None), (5, 4, None), (7, 2, None),
                                      (7, 3, None), (11, 2, None), (11, 3, None), (17, 2, 3),
                                      (31, 2, 3)])
def test_predicted_halves_match_computed(p, n, beta):
    assert gcd_halves(lsb(p, n, beta)) == predicted_gcd_halves(p, n)


@pytest.mark.parametrize("p,n", [(p, n) for p in SUPPORTED for n in range(2, 13) if p**n <= 10**6])
def test_predicted_halves_divide_their_moduli(p, n):
    N = p**n - 1
    plus, minus = predicted_gcd_halves(p, n)
    assert ((1 << N // 2) + 1) % plus == 0
    assert ((1 << N // 2) - 1) % minus == 0


# -- bounds ----------------------------------------------------------------------


def test_theorem_bound_examples():
    assert theorem_bound(3, 4) == 77
    assert theorem_bound(7, 6) == 78425
    assert theorem_bound(31, 2) == 507
    assert theorem_bound(7, 2) == 28
    assert theorem_bound(3, 2, N=8) == 5


def test_theorem_bound_errors():
    with pytest.raises(UnsupportedPrime):
        theorem_bound(13, 2)
    with pytest.raises(InvalidArgument):
        theorem_bound(3, 0)
    with pytest.raises(InvalidArgument):
        theorem_bound(3, 2, N=9)


def test_worst_constants_and_coefficients():
    assert {p: BOUNDS[p].worst_constant for p in SUPPORTED} == {3: 3, 5: 5, 7: 7, 11: 8, 17: 7, 31: 10}
    for p in SUPPORTED:
        assert bound_formula(p).coefficient == Fraction(p + 1, 2 * (p - 1))


@pytest.mark.parametrize("p", SUPPORTED)
@given(n=st.integers(1, 200))
def test_cases_are_exhaustive(p, n):
    case = BOUNDS[p].case_for(n)
    assert 0 < case.constant <= BOUNDS[p].worst_constant


def test_case_selection():
    f = BOUNDS[7]
    assert [f.case_for(n).constant for n in (2, 3, 5, 6, 9, 12)] == [4, 5, 2, 7, 5, 7]
    f = BOUNDS[31]
    assert [f.case_for(n).constant for n in (2, 3, 5, 7, 10, 15)] == [5, 5, 8, 3, 10, 10]
    assert BOUNDS[11].case_for(4).note


# -- conjecture and report -----------------------------------------------------------


def test_conjecture_main():
    assert conjecture_main(3, 8) == 8
    assert conjecture_main(7, 48) == 32
    assert conjecture_main(13, 168) == 98


def test_conjecture_check_examples():
    r = conjecture_check(lsb(7, 2), 7, 2)
    assert (r.phi2, r.main, r.slack, r.cap_source) == (31, 32, -1, "theorem") and r.ok
    r = conjecture_check(lsb(13, 2), 13, 2)
    assert r.cap_source == "heuristic" and r.cap == 32
    r = conjecture_check(lsb(3, 2), 3, 2, c_cap=0)
    assert r.cap_source == "given" and r.slack == -1 and not r.ok
    assert r.to_json()["ok"] is False
    with pytest.raises(InvalidArgument):
        conjecture_check(lsb(3, 2), 3, 3)


def test_report_examples():
    r = two_adic_report(lsb(3, 2), 3, 2)
    assert (r.phi2_exact, r.bound_value, r.slack, r.verdict) == (7, 5, 2, "pass")
    r = two_adic_report(lsb(7, 2), 7, 2)
    assert (r.phi2_exact, r.bound_value, r.verdict) == (31, 28, "pass")
    assert r.invariant_violations() == []
    d = r.to_json()
    assert d["g_full"] == hex(r.g_full) and d["verdict"] == "pass"


def test_report_exploratory_and_notes():
    r = two_adic_report(lsb(13, 2), 13, 2)
    assert r.verdict == "exploratory" and r.gcd_ok is None and r.bound_ok is None
    r = two_adic_report(lsb(17, 2, 5), 17, 2, beta=5)
    assert any("beta=5" in n for n in r.notes)
    r = two_adic_report(lsb(11, 2), 11, 2)
    assert any("3N/5-4" in n for n in r.notes)
    with pytest.raises(InvalidArgument):
        two_adic_report(lsb(3, 2), 3, 3)


@given(even_vectors)
def test_gcd_invariants_on_random_input(bits):
    s = seq_of(bits)
    m = (1 << len(bits)) - 1
    g = math.prod(gcd_halves(s))
    assert g % math.gcd(m, s_of_two(s)) == 0
    assert exact_phi2(s) >= (m // g).bit_length() - 1


def test_hex_serialisation_round_trips():
    r = two_adic_report(lsb(5, 3), 5, 3)
    d = r.to_json()
    assert int(d["S2"], 16) == r.S2
    assert int(d["predicted_minus"], 16) == r.predicted_minus
    assert np.isscalar(d["phi2_exact"])
