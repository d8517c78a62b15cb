"""Acceptance criteria, each at its stated size and tolerance.

Run ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per criterion is
printed in the terminal summary.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from lrsomega import formulas
from lrsomega.algebra import PolyQ, isolate_roots, root_of_unity_order
from lrsomega.automata import (
    ACCEPT,
    MullerAutomaton,
    adjacent_increasing_pair,
    brute_force_up_check,
    identity,
    is_increasing,
    model_check,
    monoid_embed,
    random_closed_automaton,
    random_up_word,
)
from lrsomega.lrs_core import (
    add,
    from_recurrence,
    interleave_signs,
    is_simple,
    minimize,
    mul,
    non_almost_periodic_lrs,
    sign_string,
    subsequence,
    terms,
    TermStream,
)
from lrsomega.oracle import LrsWordConfig, LrsWordOracle, lift_pattern
from lrsomega.spectrum import analyze, dominant_sign_predictor
from lrsomega.torus import arc_coverage
from lrsomega.words import UltimatelyPeriodicWord, UpWordOracle, gap_statistics, occurrences, up_inter, up_occurs_infinitely

from conftest import record

SIGNS = "-0+"

FIB = from_recurrence([1, 1], [1, 1])
ALTERNATING = from_recurrence([-1], [-1])
ZERO_MINUS_ZERO_PLUS = from_recurrence([0, -1], [0, -1])
ONE_PLUS_ALTERNATING = from_recurrence([0, 1], [0, 2])
COSINE = from_recurrence(["6/5", -1], ["3/5", "-7/25"])  # Re of ((3+4i)/5)^n


def _words(max_len):
    for k in range(1, max_len + 1):
        yield from map("".join, itertools.product(SIGNS, repeat=k))


# 1 -------------------------------------------------------------------------


def test_model_checker_matches_lasso_brute_force():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    automata = []
    while len(automata) < 500:
        A = random_closed_automaton(rng, max_states=6)
        if A is not None:
            automata.append(A)
    words = [random_up_word(rng, 8, 8) for _ in range(20)]
    cases = mismatches = 0
    for A in automata:
        for alpha in words:
            got = model_check(UpWordOracle(alpha), A).verdict == ACCEPT
            mismatches += got != brute_force_up_check(alpha, A)
            cases += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed <= 60 and max(A.size for A in automata) <= 6
    record(1, ok, f"{cases} cases ({len(automata)} automata x {len(words)} words), {mismatches} mismatches, {elapsed:.1f}s (limit 60s)")
    assert ok


# 2 -------------------------------------------------------------------------


def _example_path_automaton():
    delta = {
        "q0": {"a": "q1", "b": "q0", "c": "q0"},
        "q1": {"a": "q0", "b": "q1", "c": "q2"},
        "q2": {"a": "q0", "b": "q2", "c": "q2"},
    }
    A = MullerAutomaton(["q0", "q1", "q2"], "q0", ["a", "b", "c"], delta, [])
    A.bind(None)
    return A


def test_monoid_laws_and_example_path():
    rng = random.Random(11)
    N = 10_000
    pool = []
    while len(pool) < 40:
        A = random_closed_automaton(rng, max_states=6)
        if A is not None:
            pool.append(A)

    def rword(A):
        return "".join(rng.choice(A.alphabet) for _ in range(rng.randint(0, 8)))

    failures = {"assoc": 0, "hom": 0, "neutral": 0, "adjacent": 0}
    increasing_seen = 0
    for _ in range(N):
        A = rng.choice(pool)
        u, v, w = rword(A), rword(A), rword(A)
        x, y, z = monoid_embed(A, u), monoid_embed(A, v), monoid_embed(A, w)
        failures["assoc"] += (x * y) * z != x * (y * z)
        failures["hom"] += monoid_embed(A, u + v) != x * y
        e = identity(A.size)
        failures["neutral"] += not (x * e == x == e * x)
        xs = [monoid_embed(A, rword(A)) for _ in range(rng.randint(2, 6))]
        if is_increasing(xs):
            increasing_seen += 1
            i = adjacent_increasing_pair(xs)
            ok = i is not None and all(
                is_increasing(xs[r : rp + 1]) for r in range(i + 1) for rp in range(i + 1, len(xs))
            )
            failures["adjacent"] += not ok

    A = _example_path_automaton()
    x1, x2, x3 = (monoid_embed(A, c) for c in "abc")
    q0 = 0
    labels_ok = (
        x1.edges(A)[q0] == ("q0", frozenset({"q0", "q1"}), "q1")
        and x2.edges(A)[1] == ("q1", frozenset({"q1"}), "q1")
        and x3.edges(A)[1] == ("q1", frozenset({"q1", "q2"}), "q2")
        and (x1 * x2 * x3).edges(A)[q0] == ("q0", frozenset({"q0", "q1", "q2"}), "q2")
        and not is_increasing([x1, x2])
        and is_increasing([x1, x2, x3])
        and is_increasing([x2, x3])
    )
    ok = not any(failures.values()) and labels_ok and increasing_seen > 100
    record(2, ok, f"{N} instances per law, failures {failures}, {increasing_seen} increasing products checked, example path {'reproduced' if labels_ok else 'WRONG'}")
    assert ok


# 3 -------------------------------------------------------------------------


def test_decomposition_periods_and_interleaving():
    battery = [("Fibonacci", FIB, 1), ("(-1)^n", ALTERNATING, 2), ("0-0+", ZERO_MINUS_ZERO_PLUS, 2),
               ("1+(-1)^n", ONE_PLUS_ALTERNATING, 2), ("cos family", COSINE, 1)]
    notes = []
    ok = True
    for name, u, want in battery:
        P = analyze(u).period
        subs = [subsequence(u, l, P) for l in range(P)]
        exact = interleave_signs(subs, 1000) == sign_string(u, 1000)
        if P != want or not exact:
            ok = False
        notes.append(f"{name}: P={P} (expected {want}){'' if exact else ' interleave MISMATCH'}")
    record(3, ok, "; ".join(notes))
    assert ok


# 4 -------------------------------------------------------------------------

SIMPLE_FIXTURES = {
    "fibonacci": FIB,
    "alternating": ALTERNATING,
    "zero_minus_zero_plus": ZERO_MINUS_ZERO_PLUS,
    "one_plus_alternating": ONE_PLUS_ALTERNATING,
    "cosine": COSINE,
    "loop_difference": from_recurrence([-2, 16], [1, -3]),
    "oscillating": from_recurrence(["11/5", "-11/5", 1], [13, "21/5", "-59/25"]),
    "four_plus_half_power": from_recurrence(["3/2", "-1/2"], ["9/2", "17/4"]),
    "all_minus": from_recurrence([1], [-1]),
}


def test_dominant_sign_prediction():
    N, limit = 100_000, 1000
    t0 = time.perf_counter()
    notes, ok = [], True
    for name, u in SIMPLE_FIXTURES.items():
        pred = dominant_sign_predictor(u)
        stream = TermStream(u)
        last_bad, unknown = 0, 0
        for n in range(1, N + 1):
            exact = stream.next_sign()
            p = pred.predict(n)
            if p is None:
                unknown += 1
                last_bad = n
            elif p.value != exact:
                last_bad = n
        n_star = last_bad + 1
        good = n_star <= limit
        ok &= good
        notes.append(f"{name} n*={n_star}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed <= 120
    record(4, ok, f"{', '.join(notes)}; {elapsed:.1f}s (limit 120s)")
    assert ok


# 5 -------------------------------------------------------------------------


def _random_simple_lrs(rng):
    while True:
        d = rng.randint(1, 3)
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)]
        if coeffs[-1] == 0:
            continue
        init = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d)]
        u = from_recurrence(coeffs, init)
        if is_simple(u):
            return u


def test_closure_under_sum_and_product():
    rng = random.Random(5)
    bad = 0
    for _ in range(100):
        u, v = _random_simple_lrs(rng), _random_simple_lrs(rng)
        a, b = terms(u, 200), terms(v, 200)
        bad += terms(add(u, v), 200) != [x + y for x, y in zip(a, b)]
        bad += terms(mul(u, v), 200) != [x * y for x, y in zip(a, b)]
    sq = terms(mul(FIB, FIB), 50)
    rec_ok = all(sq[n] == 2 * sq[n - 1] + 2 * sq[n - 2] - sq[n - 3] for n in range(3, 50))
    rec_ok &= sq[:5] == [1, 1, 4, 9, 25] and list(minimize(mul(FIB, FIB)).coeffs) == [2, 2, -1]
    ok = bad == 0 and rec_ok
    record(5, ok, f"100 random pairs, {bad} pointwise mismatches; F_n^2 recurrence {'holds' if rec_ok else 'FAILS'}")
    assert ok


# 6 -------------------------------------------------------------------------


def test_counterexample_gap_growth():
    t0 = time.perf_counter()
    u = non_almost_periodic_lrs(Fraction(3, 5), Fraction(4, 5))
    text = TermStream(u).signs(100_000)
    late = occurrences(text, "+", 1000)
    g_small = gap_statistics(text[:1000], "+").max_gap
    g_big = gap_statistics(text, "+").max_gap
    elapsed = time.perf_counter() - t0
    ok = bool(late) and g_big > g_small and elapsed <= 300 and not is_simple(u)
    record(6, ok, f"{len(late)} '+' beyond index 1000; max gap {g_small} (first 10^3) vs {g_big} (first 10^5); {elapsed:.1f}s (limit 300s)")
    assert ok


# 7 -------------------------------------------------------------------------

PERIODIC_FIXTURES = [
    ("0-0+", ZERO_MINUS_ZERO_PLUS, UltimatelyPeriodicWord("", "0-0+")),
    ("(-1)^n", ALTERNATING, UltimatelyPeriodicWord("", "-+")),
    ("1+(-1)^n", ONE_PLUS_ALTERNATING, UltimatelyPeriodicWord("", "0+")),
    ("-1", SIMPLE_FIXTURES["all_minus"], UltimatelyPeriodicWord("", "-")),
    ("2cos(2pi n/3)", from_recurrence([-1, -1], [-1, -1]), UltimatelyPeriodicWord("", "--+")),
]


def _same(a, b):
    return type(a) is type(b) and (getattr(a, "bound", None), getattr(a, "threshold", None)) == (
        getattr(b, "bound", None), getattr(b, "threshold", None))


def test_oracle_agrees_with_periodic_words():
    notes, ok = [], True
    for name, u, alpha in PERIODIC_FIXTURES:
        assert sign_string(u, 60) == alpha.take(60), name
        a = analyze(u)
        assert all(root_of_unity_order(lam) is not None for lam in a.normalized), name
        o = LrsWordOracle(u, LrsWordConfig(horizon=5000, trust_threshold=1000))
        mism = 0
        count = 0
        for w in _words(6):
            count += 1
            r, e = o.occurs_infinitely(w), up_occurs_infinitely(alpha, w)
            if not _same(r, e):
                mism += 1
                continue
            ri, ei = o.inter(w), up_inter(alpha, w)
            if type(ri) is not type(ei) or getattr(ri, "separators", None) != getattr(ei, "separators", None):
                mism += 1
        ok &= mism == 0
        notes.append(f"{name}: {mism}/{count} disagreements")
    record(7, ok, "; ".join(notes))
    assert ok


# 8 -------------------------------------------------------------------------


def _rational_orbit(re, im, count):
    zr, zi = Fraction(1), Fraction(0)
    for _ in range(count + 1):
        yield zr, zi
        zr, zi = zr * re - zi * im, zr * im + zi * re


def test_certified_spot_checks():
    f = formulas.torus_formula([(1, 1)], 2)
    torus_ok = all(
        formulas.evaluate(f, {"x1": zr, "y1": zi, "x2": zr, "y2": -zi})
        for zr, zi in _rational_orbit(Fraction(3, 5), Fraction(4, 5), 10)
    )
    solver = formulas.find_solver()
    if solver is None:
        record(8, None if torus_ok else False,
               f"torus formula {'satisfied' if torus_ok else 'VIOLATED'} by orbit points n<=10; "
               "u_formula checks skipped: no SMT solver configured")
        assert torus_ok
        pytest.skip("no SMT solver configured")
    mism, checked = 0, 0
    for name, u in (("0-0+", ZERO_MINUS_ZERO_PLUS), ("Fibonacci", FIB)):
        a = analyze(u)
        enc = formulas.Encoding(a)
        text = sign_string(u, 5000)
        for w in _words(3):
            comps = lift_pattern(w, a.period, a.zero_offsets)
            sat = any(formulas.solver_check(enc.u_formula(c), solver).status == "sat" for c in comps)
            mism += sat != bool(occurrences(text, w, 1000))
            checked += 1
    ok = torus_ok and mism == 0
    record(8, ok, f"{checked} u_formula verdicts via {solver}, {mism} disagree with exact scan; "
                  f"torus formula {'satisfied' if torus_ok else 'VIOLATED'} by orbit points n<=10")
    assert ok


# 9 -------------------------------------------------------------------------


def test_kronecker_arc_coverage():
    lam = isolate_roots(PolyQ((Fraction(1), Fraction(-6, 5), Fraction(1))))[0]
    covered, worst = arc_coverage(lam, 0.1, 0.05, 1000)
    ok = covered and worst <= 1000
    record(9, ok, f"all arcs of width 0.1 on a 0.05 grid hit; last first-hit at step {worst} (limit 1000)")
    assert ok
