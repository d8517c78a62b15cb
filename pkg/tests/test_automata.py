import random

import pytest

from lrsomega.automata import (
    ACCEPT,
    REJECT,
    MullerAutomaton,
    adjacent_increasing_pair,
    brute_force_up_check,
    identity,
    is_increasing,
    is_prefix_independent,
    suffix_closure_violations,
    model_check,
    monoid_embed,
    monoid_letter,
    random_closed_automaton,
    random_up_word,
)
from lrsomega.errors import AlphabetMismatch, InvalidInput
from lrsomega.oracle import LrsWordConfig, LrsWordOracle
from lrsomega.words import UltimatelyPeriodicWord, UpWordOracle

from conftest import fixture_path


def inf_plus():
    return MullerAutomaton.load(fixture_path("inf_plus.json"))


def three_state_path():
    """The path q0 -a-> q1 -b-> q1 -c-> q2, completed arbitrarily."""
    delta = {
        "q0": {"a": "q1", "b": "q0", "c": "q0"},
        "q1": {"a": "q0", "b": "q1", "c": "q2"},
        "q2": {"a": "q0", "b": "q2", "c": "q2"},
    }
    return MullerAutomaton(["q0", "q1", "q2"], "q0", ["a", "b", "c"], delta, [])


def test_validation_errors():
    with pytest.raises(InvalidInput, match="complete"):
        MullerAutomaton(["q"], "q", ["+", "-"], {"q": {"+": "q"}}, [])
    with pytest.raises(InvalidInput, match="unreachable"):
        MullerAutomaton(["q", "r"], "q", ["+"], {"q": {"+": "q"}, "r": {"+": "q"}}, [])
    with pytest.raises(InvalidInput):
        MullerAutomaton.from_json("{")


def test_alphabet_mismatch():
    oracle = UpWordOracle(UltimatelyPeriodicWord("", "+"))
    A = MullerAutomaton.load(fixture_path("wrong_alphabet.json"))
    with pytest.raises(AlphabetMismatch):
        model_check(oracle, A)


def test_json_roundtrip():
    A = inf_plus()
    assert MullerAutomaton.from_json(A.to_json()).to_json() == A.to_json()


def test_identity_and_letter_edges():
    A = three_state_path()
    A.bind(None)
    assert monoid_embed(A, "") == identity(3)
    a = monoid_letter(A, "a")
    assert a.edges(A)[0] == ("q0", frozenset({"q0", "q1"}), "q1")


def test_path_composition_labels():
    A = three_state_path()
    A.bind(None)
    x1, x2, x3 = (monoid_embed(A, c) for c in "abc")
    assert (x1 * x2 * x3).edges(A)[0] == ("q0", frozenset({"q0", "q1", "q2"}), "q2")
    assert not is_increasing([x1, x2])
    assert is_increasing([x1, x2, x3])
    assert adjacent_increasing_pair([x1, x2, x3]) == 1
    assert not is_increasing([x1, identity(3)])


@pytest.mark.parametrize("cycle,expected", [("0-0+", ACCEPT), ("-", REJECT), ("0", REJECT), ("+-", ACCEPT)])
def test_model_check_up_words(cycle, expected):
    r = model_check(UpWordOracle(UltimatelyPeriodicWord("+", cycle)), inf_plus())
    assert r.verdict == expected


def test_model_check_fibonacci_eventually_nonneg(lrs_fixture):
    o = LrsWordOracle(lrs_fixture("fibonacci"), LrsWordConfig(horizon=3000, trust_threshold=1000))
    A = MullerAutomaton.load(fixture_path("eventually_nonneg.json"))
    assert model_check(o, A).verdict == ACCEPT


def test_model_check_agrees_with_lassos():
    rng = random.Random(7)
    done = 0
    while done < 60:
        A = random_closed_automaton(rng, 5)
        if A is None:
            continue
        assert is_prefix_independent(A)
        assert suffix_closure_violations(A, 30, rng) == []
        for _ in range(5):
            alpha = random_up_word(rng)
            r = model_check(UpWordOracle(alpha), A)
            assert (r.verdict == ACCEPT) == brute_force_up_check(alpha, A)
        done += 1


def test_prefix_dependent_automaton_detected():
    # accepts iff the first letter was "+": not prefix independent
    delta = {"s": {"+": "p", "-": "m"}, "p": {"+": "p", "-": "p"}, "m": {"+": "m", "-": "m"}}
    A = MullerAutomaton(["s", "p", "m"], "s", ["+", "-"], delta, [frozenset({"p"})])
    assert not is_prefix_independent(A)
