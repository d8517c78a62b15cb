from fractions import Fraction

import pytest

from lrsomega.errors import NotSimple
from lrsomega.lrs_core import from_recurrence, sign_at
from lrsomega.spectrum import analyze, dominant_sign_predictor


def test_fibonacci_is_non_degenerate(lrs_fixture):
    a = analyze(lrs_fixture("fibonacci"))
    assert a.period == 1 and a.zero_offsets == frozenset()
    assert len(a.roots) == 2


def test_zero_minus_zero_plus_period(lrs_fixture):
    a = analyze(lrs_fixture("zero_minus_zero_plus"))
    assert a.period == 2
    assert a.zero_offsets == frozenset({0})


def test_one_plus_alternating_period(lrs_fixture):
    a = analyze(lrs_fixture("one_plus_alternating"))
    assert a.period == 2
    assert a.zero_offsets == frozenset({0})


def test_single_root_has_no_ratio_constraint(lrs_fixture):
    # (-1)^n has a single characteristic root, so no ratio forces P > 1
    assert analyze(lrs_fixture("alternating")).period == 1


def test_cosine_family_is_non_degenerate(lrs_fixture):
    a = analyze(lrs_fixture("cosine"))
    assert a.period == 1
    assert len(a.active_groups) == 2


def test_forced_period_must_be_multiple(lrs_fixture):
    u = lrs_fixture("zero_minus_zero_plus")
    assert analyze(u, period=4).period == 4
    with pytest.raises(ValueError):
        analyze(u, period=3)


def test_non_simple_rejected_with_factor(lrs_fixture):
    with pytest.raises(NotSimple, match="repeated factor"):
        analyze(lrs_fixture("non_simple"))


@pytest.mark.parametrize("name", ["fibonacci", "zero_minus_zero_plus", "cosine", "loop_difference", "four_plus_half_power"])
def test_predictor_matches_exact_signs(lrs_fixture, name):
    u = lrs_fixture(name)
    pred = dominant_sign_predictor(u)
    for n in range(50, 400):
        assert pred.predict(n) == sign_at(u, n)


def test_cosine_sign_pattern_prediction():
    u = from_recurrence([Fraction(6, 5), -1], [Fraction(3, 5), Fraction(-7, 25)])
    pred = dominant_sign_predictor(u)
    assert [pred.predict(n) for n in (1, 2, 3)] == [sign_at(u, n) for n in (1, 2, 3)]
