from fractions import Fraction

import pytest

from lrsomega.errors import InvalidInput
from lrsomega.lrs_core import (
    ZERO,
    Sign,
    TermStream,
    add,
    apply_polynomial,
    from_json,
    from_recurrence,
    interleave_signs,
    is_identically_zero,
    is_simple,
    minimize,
    mul,
    non_almost_periodic_lrs,
    parse_polynomial,
    sign_at,
    sign_string,
    subsequence,
    term,
    terms,
)

FIB = from_recurrence([1, 1], [1, 1])


def test_fibonacci_terms():
    assert terms(FIB, 10) == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert term(FIB, 10) == 55
    assert term(FIB, 5000) == terms(FIB, 5000)[-1]


def test_rational_cosine_family_terms():
    u = from_recurrence(["6/5", -1], ["3/5", "-7/25"])
    assert term(u, 3) == Fraction(-117, 125)
    assert sign_string(u, 3) == "+--"


def test_integer_scaled_stream_matches_fractions():
    u = from_recurrence(["3/2", "-1/2"], ["9/2", "17/4"])
    s = TermStream(u)
    got = [s.next_term() for _ in range(40)]
    assert got == terms(u, 40)


def test_sign_prefix_of_zero_minus_zero_plus():
    u = from_recurrence([0, -1], [0, -1])
    assert sign_string(u, 8) == "0-0+0-0+"
    assert sign_at(u, 4) is Sign.PLUS


def test_json_validation():
    with pytest.raises(InvalidInput):
        from_json('{"coeffs": [1], "initial": [1, 2]}')
    with pytest.raises(InvalidInput):
        from_json("{not json")
    u = from_json(FIB.to_json())
    assert u == FIB


def test_minimize_drops_redundant_roots():
    u = from_recurrence([2, 1, -2], [1, 1, 1])  # roots 1, -1, 2; constant initial terms
    m = minimize(u)
    assert terms(m, 30) == terms(u, 30)
    assert m.order <= u.order
    padded = from_recurrence([1, 1, 0], [1, 1, 2])
    assert minimize(padded).order == 2


def test_zero_sequence_is_canonical():
    z = from_recurrence([1, 1], [0, 0])
    assert is_identically_zero(z)
    assert minimize(z) == ZERO


def test_simplicity():
    assert is_simple(FIB)
    assert not is_simple(from_recurrence([2, -1], [1, 2]))  # u_n = n


def test_closure_add_and_mul():
    v = from_recurrence([2], [1])
    s, p = add(FIB, v), mul(FIB, v)
    a, b = terms(FIB, 60), terms(v, 60)
    assert terms(s, 60) == [x + y for x, y in zip(a, b)]
    assert terms(p, 60) == [x * y for x, y in zip(a, b)]


def test_fibonacci_squared_recurrence():
    sq = minimize(mul(FIB, FIB))
    assert list(sq.coeffs) == [2, 2, -1]


def test_polynomial_application():
    F = parse_polynomial("x^2 - 2", 1)
    assert terms(apply_polynomial(F, [FIB]), 5) == [-1, -1, 2, 7, 23]
    with pytest.raises(InvalidInput):
        parse_polynomial("x*q", 1)


def test_subsequences_and_interleaving():
    u = from_recurrence([0, -1], [0, -1])
    assert sign_string(subsequence(u, 0, 2), 5) == "00000"
    assert sign_string(subsequence(u, 1, 2), 4) == "-+-+"
    subs = [subsequence(FIB, l, 3) for l in range(3)]
    assert interleave_signs(subs, 50) == sign_string(FIB, 50)


def test_counterexample_construction():
    u = non_almost_periodic_lrs()
    assert u.order == 6
    assert not is_simple(u)
    with pytest.raises(InvalidInput):
        non_almost_periodic_lrs(Fraction(1, 2), Fraction(1, 2))
