from fractions import Fraction

import pytest

from lrsomega.algebra import (
    AlgebraicNumber,
    PolyQ,
    compare_modulus,
    isolate_roots,
    lcm,
    parse_rational,
    ratio_min_poly,
    root_of_unity_order,
)
from lrsomega.errors import InvalidInput


def P(*c):
    return PolyQ(tuple(Fraction(x) for x in c))


def test_parse_rational_forms():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational(-2) == Fraction(-2)
    with pytest.raises(InvalidInput):
        parse_rational("1/0")
    with pytest.raises(InvalidInput):
        parse_rational("abc")


def test_poly_arithmetic_and_gcd():
    a = P(-1, 0, 1)  # x^2 - 1
    b = P(1, 1)
    q, r = a.divmod(b)
    assert q == P(-1, 1) and r.is_zero()
    assert a.gcd(P(-1, 1)) == P(-1, 1)
    assert a.derivative() == P(0, 2)


def test_factor_and_irreducible():
    f = P(-1, 0, 0, 0, 1)  # x^4 - 1
    degs = sorted(g.degree for g in f.factor())
    assert degs == [1, 1, 2]
    assert P(-2, 0, 1).is_irreducible()
    assert not f.is_irreducible()


def test_isolate_golden_ratio_roots():
    roots = isolate_roots(P(-1, -1, 1))
    assert len(roots) == 2 and all(r.is_real for r in roots)
    vals = sorted(float(r.enclosure(64).real.mid()) for r in roots)
    assert vals[0] == pytest.approx(-0.6180339887) and vals[1] == pytest.approx(1.6180339887)


def test_isolate_rejects_repeated_roots():
    with pytest.raises(InvalidInput, match="repeated"):
        isolate_roots(P(1, -2, 1))


def test_complex_roots_come_in_conjugate_pairs():
    roots = isolate_roots(P(1, Fraction(-6, 5), 1))
    assert len(roots) == 2
    assert roots[0].conjugate().same_as(roots[1])


def test_roots_of_unity_orders():
    i = isolate_roots(P(1, 0, 1))[0]
    assert root_of_unity_order(i) == 4
    assert root_of_unity_order(AlgebraicNumber.rational(-1)) == 2
    assert root_of_unity_order(AlgebraicNumber.rational(1)) == 1
    lam = isolate_roots(P(1, Fraction(-6, 5), 1))[0]  # (3+4i)/5
    assert root_of_unity_order(lam) is None
    w = isolate_roots(P(1, 1, 1))[0]  # primitive cube root
    assert root_of_unity_order(w) == 3


def test_ratio_of_opposite_roots():
    a, b = AlgebraicNumber.rational(2), AlgebraicNumber.rational(-2)
    m, v = ratio_min_poly(a, b)
    assert v.is_rational() and v.rational_value() == -1
    assert m.monic() == P(1, 1)


def test_exact_arithmetic_of_sqrt2():
    s = [r for r in isolate_roots(P(-2, 0, 1)) if r.enclosure(64).real > 0][0]
    sq = s * s
    assert sq.is_rational() and sq.rational_value() == 2
    assert (s + s).minimal_poly == P(-8, 0, 1)
    assert (s.inverse() * s).rational_value() == 1
    assert (s ** -2).rational_value() == Fraction(1, 2)


def test_unit_part_of_scaled_unit():
    lam = isolate_roots(P(25, -30, 25))[0]  # roots (3 +- 4i)/5 scaled: x^2 - 6/5 x + 1
    big = lam.scale(Fraction(5))
    u = big.unit_part()
    assert u.same_as(lam)


def test_compare_modulus():
    a, b = AlgebraicNumber.rational(2), AlgebraicNumber.rational(-2)
    assert compare_modulus(a, b) == 0
    assert compare_modulus(AlgebraicNumber.rational(3), a) == 1
    i = isolate_roots(P(1, 0, 1))[0]
    assert compare_modulus(i, AlgebraicNumber.rational(1)) == 0


def test_lcm():
    assert lcm([2, 3, 4]) == 12
    assert lcm([]) == 1
