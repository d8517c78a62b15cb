"""Exact rational linear recurrence sequences.

Indexing is 1-based: ``u.initial[k]`` is u_{k+1} and the recurrence
u_n = a_1 u_{n-1} + ... + a_d u_{n-d} holds for n > d.  Sign words, on the
other hand, are 0-based strings (position k holds sgn(u_{k+1})); the single
adapter between the two views is :func:`subsequence`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import islice
from typing import Iterator, Mapping, Sequence

from flint import fmpq, fmpq_mat

from .algebra import PolyQ, charpoly, companion_matrix, format_rational, kron, parse_rational
from .errors import InvalidInput


class Sign(str, Enum):
    MINUS = "-"
    ZERO = "0"
    PLUS = "+"

    @classmethod
    def of(cls, x) -> "Sign":
        return cls.PLUS if x > 0 else cls.MINUS if x < 0 else cls.ZERO

    def __str__(self):
        return self.value


def sgn_char(x) -> str:
    return "+" if x > 0 else "-" if x < 0 else "0"


@dataclass(frozen=True)
class Lrs:
    coeffs: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs or not self.initial:
            raise InvalidInput("empty recurrence")
        if len(self.coeffs) != len(self.initial):
            raise InvalidInput(f"length mismatch: {len(self.coeffs)} coefficients, {len(self.initial)} initial terms")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def char_poly(self) -> PolyQ:
        """x^d - a_1 x^{d-1} - ... - a_d."""
        return PolyQ([-c for c in reversed(self.coeffs)] + [1])

    def companion(self) -> fmpq_mat:
        return companion_matrix(self.char_poly())

    def to_json(self) -> str:
        return json.dumps(
            {"coeffs": [format_rational(c) for c in self.coeffs], "initial": [format_rational(c) for c in self.initial]}
        )

    def __repr__(self):
        cs = ", ".join(map(format_rational, self.coeffs))
        ini = ", ".join(map(format_rational, self.initial))
        return f"Lrs(coeffs=[{cs}], initial=[{ini}])"


def from_recurrence(coeffs: Sequence, initial: Sequence) -> Lrs:
    return Lrs(tuple(parse_rational(c) for c in coeffs), tuple(parse_rational(c) for c in initial))


def from_json(text_or_obj) -> Lrs:
    if isinstance(text_or_obj, str):
        try:
            obj = json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed LRS JSON ({exc})") from exc
    else:
        obj = text_or_obj
    if not isinstance(obj, Mapping) or "coeffs" not in obj or "initial" not in obj:
        raise InvalidInput('LRS JSON needs "coeffs" and "initial"')
    return from_recurrence(obj["coeffs"], obj["initial"])


def load(path) -> Lrs:
    try:
        with open(path, encoding="utf-8") as fh:
            return from_json(json.load(fh))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc})") from exc


def constant(c) -> Lrs:
    return Lrs((Fraction(1),), (Fraction(c),))


ZERO = constant(0)


def from_char_poly(p: PolyQ, initial: Sequence) -> Lrs:
    p = p.monic()
    d = p.degree
    return Lrs(tuple(-p.coeffs[d - i] for i in range(1, d + 1)), tuple(Fraction(x) for x in initial))


# ---------------------------------------------------------------------------
# evaluation


def _scaling(coeffs: Sequence[Fraction]) -> int:
    """Least L with a_i * L**i integral for every i."""
    need: dict[int, int] = {}
    for i, a in enumerate(coeffs, start=1):
        q = a.denominator
        p = 2
        while q > 1:
            if p * p > q:
                p = q
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            if e:
                need[p] = max(need.get(p, 0), -(-e // i))
            p += 1
    return math.prod(p**e for p, e in need.items())


class TermStream:
    """Streaming exact evaluation with integer state.

    Keeps w_n = D * L**n * u_n for the last d indices, where L makes the
    scaled coefficients integral and D clears the initial denominators, so
    sgn(w_n) = sgn(u_n) and each step is a handful of big-int operations.
    Single owner; create one per consumer.
    """

    def __init__(self, u: Lrs):
        self.u = u
        d = u.order
        L = _scaling(u.coeffs)
        D = reduce(math.lcm, (x.denominator for x in u.initial), 1)
        self.L, self.D = L, D
        self.scaled = [int(a * L**i) for i, a in enumerate(u.coeffs, start=1)]
        self.window = [int(x * D * L ** (k + 1)) for k, x in enumerate(u.initial)]  # w_1..w_d
        self.n = 0  # index of the last value handed out
        self.d = d

    def _scaled_next(self) -> int:
        """Advance and return the scaled value at index self.n."""
        self.n += 1
        if self.n <= self.d:
            return self.window[self.n - 1]
        w = self.window
        val = 0
        for a, x in zip(self.scaled, reversed(w)):
            if a:
                val += a * x
        w.pop(0)
        w.append(val)
        return val

    def next_sign(self) -> str:
        return sgn_char(self._scaled_next())

    def next_term(self) -> Fraction:
        v = self._scaled_next()
        return Fraction(v, self.D * self.L**self.n)

    def signs(self, count: int) -> str:
        step = self._scaled_next
        out = []
        append = out.append
        for _ in range(count):
            v = step()
            append("+" if v > 0 else "-" if v < 0 else "0")
        return "".join(out)


def iter_terms(u: Lrs) -> Iterator[Fraction]:
    s = TermStream(u)
    while True:
        yield s.next_term()


def terms(u: Lrs, count: int) -> list[Fraction]:
    return list(islice(iter_terms(u), count))


def iter_signs(u: Lrs) -> Iterator[Sign]:
    s = TermStream(u)
    while True:
        yield Sign(s.next_sign())


_FAST_PATH = 4096


def term(u: Lrs, n: int) -> Fraction:
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"invalid index {n!r} (indices start at 1)")
    d = u.order
    if n <= d:
        return u.initial[n - 1]
    if n < _FAST_PATH:
        s = TermStream(u)
        for _ in range(n - 1):
            s._scaled_next()
        return s.next_term()
    # state vector (u_{k}, ..., u_{k+d-1}) advances by the transposed companion
    m = fmpq_mat(d, d)
    for i in range(d - 1):
        m[i, i + 1] = 1
    for i, a in enumerate(u.coeffs):
        m[d - 1, d - 1 - i] = fmpq(a.numerator, a.denominator)
    x = fmpq_mat(d, 1, [fmpq(c.numerator, c.denominator) for c in u.initial])
    y = (m ** (n - 1)) * x
    v = y[0, 0]
    return Fraction(int(v.p), int(v.q))


def sign_at(u: Lrs, n: int) -> Sign:
    return Sign.of(term(u, n))


def sign_prefix(u: Lrs, N: int) -> list[Sign]:
    if N < 0:
        raise InvalidInput("negative length")
    return [Sign(c) for c in TermStream(u).signs(N)]


def sign_string(u: Lrs, N: int) -> str:
    """First N signs as a string over '-0+' (position k is sgn(u_{k+1}))."""
    if N < 0:
        raise InvalidInput("negative length")
    return TermStream(u).signs(N)


# ---------------------------------------------------------------------------
# minimization


def _berlekamp_massey(seq: Sequence[Fraction]) -> list[Fraction]:
    """Shortest c with seq[n] = sum c[i] seq[n-1-i] for all valid n."""
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n, s in enumerate(seq):
        disc = s
        for i in range(1, L + 1):
            disc += C[i] * seq[n - i]
        if disc == 0:
            m += 1
            continue
        coef = disc / b
        T = C[:]
        C = C + [Fraction(0)] * (len(B) + m - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, disc, 1
        else:
            m += 1
    C = C + [Fraction(0)] * (L + 1 - len(C))
    return [-C[i] for i in range(1, L + 1)]


def is_identically_zero(u: Lrs) -> bool:
    return all(x == 0 for x in u.initial)


def minimize(u: Lrs) -> Lrs:
    """Minimal-order recurrence with the same terms.

    Berlekamp-Massey on the first 2d terms; for a sequence of linear
    complexity at most d this is the unique minimal recurrence.  A leading
    transient (characteristic root 0) survives as a zero last coefficient.
    """
    seq = terms(u, 2 * u.order)
    if all(x == 0 for x in seq):
        return ZERO
    c = _berlekamp_massey(seq)
    if not c:
        return ZERO
    return Lrs(tuple(c), tuple(seq[: len(c)]))


def is_simple(u: Lrs) -> bool:
    m = minimize(u)
    p = m.char_poly()
    return p.gcd(p.derivative()).degree == 0


# ---------------------------------------------------------------------------
# closure


def _with_poly(p: PolyQ, seq_terms: Sequence[Fraction]) -> Lrs:
    d = p.degree
    return minimize(from_char_poly(p, seq_terms[:d]))


def add(u: Lrs, v: Lrs) -> Lrs:
    # direct sum of companions: characteristic polynomial is the product
    p = u.char_poly() * v.char_poly()
    n = p.degree
    tu, tv = terms(u, n), terms(v, n)
    return _with_poly(p, [a + b for a, b in zip(tu, tv)])


def scale(u: Lrs, c) -> Lrs:
    c = Fraction(c)
    if c == 0:
        return ZERO
    return Lrs(u.coeffs, tuple(c * x for x in u.initial))


def neg(u: Lrs) -> Lrs:
    return scale(u, -1)


def sub(u: Lrs, v: Lrs) -> Lrs:
    return add(u, neg(v))


def mul(u: Lrs, v: Lrs) -> Lrs:
    if is_identically_zero(u) or is_identically_zero(v):
        return ZERO
    u, v = minimize(u), minimize(v)
    if u.order == 1 and u.coeffs[0] == 1:
        return scale(v, u.initial[0])
    if v.order == 1 and v.coeffs[0] == 1:
        return scale(u, v.initial[0])
    p = charpoly(kron(u.companion(), v.companion()))
    n = p.degree
    tu, tv = terms(u, n), terms(v, n)
    return _with_poly(p, [a * b for a, b in zip(tu, tv)])


def power(u: Lrs, k: int) -> Lrs:
    out = constant(1)
    base = u
    while k:
        if k & 1:
            out = mul(out, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return out


def parse_polynomial(text: str, nvars: int) -> dict[tuple[int, ...], Fraction]:
    """Parse a polynomial string in x (or x1..xm / x, y, z) into {exponents: coeff}."""
    import sympy

    names = ["x", "y", "z", "w"] if nvars <= 4 else []
    symbols = {f"x{i + 1}": sympy.Symbol(f"x{i + 1}") for i in range(nvars)}
    for i, nm in enumerate(names[:nvars]):
        symbols[nm] = symbols[f"x{i + 1}"]
    try:
        expr = sympy.sympify(text, locals=symbols, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise InvalidInput(f"cannot parse polynomial {text!r}") from exc
    gens = [symbols[f"x{i + 1}"] for i in range(nvars)]
    extra = expr.free_symbols - set(gens)
    if extra:
        raise InvalidInput(f"polynomial {text!r} uses unknown variables {sorted(map(str, extra))} (arity {nvars})")
    poly = sympy.Poly(expr, *gens) if gens else None
    if poly is None:
        return {(): Fraction(str(expr))}
    out = {}
    for mon, c in poly.terms():
        if not c.is_Rational:
            raise InvalidInput(f"non-rational coefficient in {text!r}")
        out[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return out


def apply_polynomial(F, us: Sequence[Lrs]) -> Lrs:
    """The sequence n -> F(u^(1)_n, ..., u^(m)_n).

    ``F`` is a mapping from exponent tuples to rational coefficients, or a
    polynomial string in x / x,y,z / x1..xm.
    """
    m = len(us)
    if isinstance(F, str):
        F = parse_polynomial(F, m)
    powers: dict[tuple[int, int], Lrs] = {}
    acc = ZERO
    for exps, c in F.items():
        if len(exps) != m and exps != ():
            raise InvalidInput(f"arity mismatch: monomial {exps} for {m} sequences")
        term_seq = constant(c)
        for j, e in enumerate(exps):
            if e:
                key = (j, e)
                if key not in powers:
                    powers[key] = power(us[j], e)
                term_seq = mul(term_seq, powers[key])
        acc = add(acc, term_seq)
    return minimize(acc)


def subsequence(u: Lrs, offset: int, step: int) -> Lrs:
    """v_n = u_{offset + 1 + (n-1)*step}, i.e. positions offset, offset+step, ... of the 0-based sign word."""
    if step < 1:
        raise InvalidInput("step must be positive")
    if offset < 0:
        raise InvalidInput("negative offset")
    u = minimize(u)
    if is_identically_zero(u):
        return ZERO
    d = u.order
    p = charpoly(u.companion() ** step)
    s = TermStream(u)
    seq = []
    for idx in range(1, offset + 1 + (d - 1) * step + 1):
        t = s.next_term()
        if idx >= offset + 1 and (idx - offset - 1) % step == 0:
            seq.append(t)
    return _with_poly(p, seq)


def interleave_signs(subs: Sequence[Lrs], N: int) -> str:
    """Rebuild the first N signs from the step-P subsequences for offsets 0..P-1."""
    P = len(subs)
    per = -(-N // P) if P else 0
    parts = [sign_string(s, per) for s in subs]
    return "".join(parts[k % P][k // P] for k in range(N))


# ---------------------------------------------------------------------------
# the non-almost-periodic example u_n = 1 - n + n Re(lambda^n)


def non_almost_periodic_lrs(re=Fraction(3, 5), im=Fraction(4, 5)) -> Lrs:
    """Order-6 LRS u_n = 1 - n + n cos(n theta) for a rational point re + i*im on the unit circle."""
    re, im = parse_rational(re), parse_rational(im)
    if re * re + im * im != 1:
        raise InvalidInput(f"{format_rational(re)} + {format_rational(im)}i is not on the unit circle")
    if im == 0:
        raise InvalidInput("lambda must be non-real")
    quad = PolyQ([1, -2 * re, 1])
    p = quad * quad * PolyQ([-1, 1]) ** 2
    init = []
    zr, zi = Fraction(1), Fraction(0)
    for n in range(1, 7):
        zr, zi = zr * re - zi * im, zr * im + zi * re
        init.append(1 - n + n * zr)
    return from_char_poly(p, init)
