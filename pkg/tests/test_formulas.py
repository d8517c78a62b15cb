import itertools
from fractions import Fraction

import pytest

from lrsomega.errors import SolverProtocolError
from lrsomega.formulas import (
    FALSE,
    TRUE,
    Encoding,
    ForAll,
    Poly,
    conj,
    disj,
    eq,
    evaluate,
    free_variables,
    gt,
    is_quantified,
    lt,
    parse_smtlib,
    solver_check,
    to_smtlib,
    torus_formula,
)
from lrsomega.lrs_core import sign_string
from lrsomega.oracle import lift_pattern
from lrsomega.spectrum import analyze
from lrsomega.words import occurrences

x, y = Poly.var("x"), Poly.var("y")


def test_poly_arithmetic_and_evaluation():
    p = (x + 1) * (x - 1) - y * Fraction(1, 2)
    assert p.evaluate({"x": 3, "y": 4}) == 6
    assert p.variables() == {"x", "y"}


def test_connective_simplification():
    assert conj() == TRUE and disj() == FALSE
    assert conj(gt(x), FALSE) == FALSE
    assert disj(gt(x), TRUE) == TRUE
    assert conj(gt(x)) == gt(x)


def test_smtlib_round_trip():
    f = conj(gt(x * x - 2), lt(x - Fraction(3, 2)), eq(y * y + x - 1))
    text = to_smtlib(f)
    assert "(set-logic QF_NRA)" in text and "(declare-fun x () Real)" in text
    assert "." not in text.replace("(check-sat)", "")
    assert parse_smtlib(text) == f


def test_quantified_emission():
    f = ForAll(("y",), disj(lt(y), gt(x - y * y)))
    assert is_quantified(f) and free_variables(f) == {"x"}
    assert "(set-logic NRA)" in to_smtlib(f)
    with pytest.raises(ValueError):
        evaluate(f, {"x": 1})


def test_torus_formula_on_rational_orbit():
    f = torus_formula([(1, 1)], 2)
    re, im = Fraction(3, 5), Fraction(4, 5)
    zr, zi = Fraction(1), Fraction(0)
    for _ in range(11):
        env = {"x1": zr, "y1": zi, "x2": zr, "y2": -zi}
        assert evaluate(f, env)
        zr, zi = zr * re - zi * im, zr * im + zi * re
    assert not evaluate(f, {"x1": 1, "y1": 0, "x2": 0, "y2": 1})


def test_missing_solver_is_unknown(tmp_path):
    r = solver_check(gt(x), str(tmp_path / "no-such-solver"))
    assert r.status == "unknown"


def test_garbled_solver_output(tmp_path):
    fake = tmp_path / "fake"
    fake.write_text("#!/bin/sh\necho banana\n")
    fake.chmod(0o755)
    with pytest.raises(SolverProtocolError):
        solver_check(gt(x), str(fake))


def test_solver_on_small_systems(solver):
    assert solver_check(conj(gt(x), lt(x - 1)), solver).status == "sat"
    assert solver_check(conj(gt(x), lt(x)), solver).status == "unsat"


@pytest.mark.parametrize("name", ["zero_minus_zero_plus", "fibonacci"])
def test_u_formula_matches_scan(lrs_fixture, solver, name):
    u = lrs_fixture(name)
    a = analyze(u)
    enc = Encoding(a)
    text = sign_string(u, 3000)
    for k in (1, 2, 3):
        for w in map("".join, itertools.product("-0+", repeat=k)):
            comps = lift_pattern(w, a.period, a.zero_offsets)
            sat = any(solver_check(enc.u_formula(c), solver).status == "sat" for c in comps)
            assert sat == bool(occurrences(text, w, 1000))
