"""Exact rational, polynomial and algebraic-number arithmetic.

Rationals are :class:`fractions.Fraction`.  Polynomials over Q are
:class:`PolyQ` (coefficients lowest degree first).  Algebraic numbers are a
defining squarefree polynomial plus an isolating complex ball; every ball
enclosure produced here is rigorous (Arb ball arithmetic through
python-flint), so sign and equality decisions are certified or reported as
:class:`PrecisionExhausted`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from flint import acb, arb, ctx, fmpq, fmpq_mat, fmpq_poly

from .errors import DivisionByZero, InvalidInput, PrecisionExhausted

START_PREC = 128
MAX_PREC = 8192
# complex_roots() of huge companion products gets slow; beyond this we stop.
MAX_MATRIX_DIM = 96

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` / ``"p"`` (no decimals).  Ints and Fractions pass through."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise InvalidInput(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise InvalidInput(f"malformed rational {text!r} (expected 'p/q' or 'p')")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# polynomials over Q


class PolyQ:
    """Immutable univariate polynomial with rational coefficients, lowest first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("PolyQ is immutable")

    @classmethod
    def x(cls) -> "PolyQ":
        return cls([0, 1])

    @classmethod
    def from_flint(cls, p) -> "PolyQ":
        return cls(Fraction(int(c.p), int(c.q)) for c in fmpq_poly(p).coeffs())

    def to_flint(self) -> fmpq_poly:
        return fmpq_poly([fmpq(c.numerator, c.denominator) for c in self.coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def monic(self) -> "PolyQ":
        if self.is_zero():
            return self
        lc = self.leading
        return PolyQ(c / lc for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyQ(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PolyQ([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "PolyQ"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(len(rem) - dq, 1)
        lc = other.leading
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return PolyQ(quo), PolyQ(rem[:dq] if dq > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "PolyQ":
        return PolyQ(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        balls = isinstance(x, (acb, arb))
        acc = acb(0) if balls else 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (to_acb(c) if balls else c)
        return acc

    def gcd(self, other: "PolyQ") -> "PolyQ":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def compose_scale(self, t) -> "PolyQ":
        """``p(t*x)``."""
        return PolyQ(c * t**i for i, c in enumerate(self.coeffs))

    def substitute_power(self, k: int) -> "PolyQ":
        """``p(x**k)``."""
        out = [Fraction(0)] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return PolyQ(out)

    def factor(self) -> list["PolyQ"]:
        """Distinct monic irreducible factors over Q."""
        if self.degree < 1:
            return []
        _, facs = self.to_flint().factor()
        return [PolyQ.from_flint(f).monic() for f, _ in facs]

    def is_irreducible(self) -> bool:
        if self.degree < 1:
            return False
        _, facs = self.to_flint().factor()
        return len(facs) == 1 and facs[0][1] == 1

    def squarefree_part(self) -> "PolyQ":
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def __repr__(self):
        return f"PolyQ({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                body = mon if mag == 1 else f"{format_rational(mag)}*{mon}"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(p) -> PolyQ:
    return p if isinstance(p, PolyQ) else PolyQ([p])


def poly_squarefree(p: PolyQ) -> bool:
    """True iff ``p`` has no repeated complex root."""
    if p.is_zero():
        raise InvalidInput("zero polynomial")
    return p.gcd(p.derivative()).degree == 0


def repeated_factor(p: PolyQ) -> PolyQ:
    """The monic gcd(p, p'); constant 1 when p is squarefree."""
    return p.gcd(p.derivative())


# ---------------------------------------------------------------------------
# ball helpers


def to_acb(q) -> acb:
    if isinstance(q, acb):
        return q
    if isinstance(q, complex):
        return acb(to_acb(Fraction(q.real)).real, to_acb(Fraction(q.imag)).real)
    q = Fraction(q)
    return acb(fmpq(q.numerator, q.denominator))


def arb_to_interval(x: arb) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of a real ball."""
    m, e = x.mid().man_exp()
    mid = Fraction(int(m)) * Fraction(2) ** int(e)
    rm, re_ = x.rad().mid().man_exp()
    rad = Fraction(int(rm)) * Fraction(2) ** int(re_)
    return mid - rad, mid + rad


def ball_sign(x: arb):
    """+1 / -1 if the ball excludes zero, 0 if it is exactly zero, None if it straddles."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    if x.is_zero():
        return 0
    return None


def ball_width_bits(z: acb) -> float:
    r = max(z.real.rad(), z.imag.rad())
    if r == 0:
        return math.inf
    return -float(r.log()) / math.log(2)


# ---------------------------------------------------------------------------
# algebraic numbers


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """A complex algebraic number: root of ``defining_poly`` isolated by ``ball``.

    ``ball`` is an isolating Arb ball at ``precision`` bits; :meth:`enclosure`
    returns tighter balls on demand without mutating the object.
    """

    defining_poly: PolyQ
    ball: acb
    precision: int = START_PREC
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(PolyQ([-q, 1]), to_acb(q), START_PREC)

    @classmethod
    def select(cls, candidates: Sequence[PolyQ], target, max_prec: int = MAX_PREC) -> "AlgebraicNumber":
        """The unique root of one of ``candidates`` lying in every ``target(prec)`` ball.

        ``target`` maps a precision to a rigorous enclosure of the number sought;
        the number must be a root of some candidate polynomial.
        """
        prec = START_PREC
        while prec <= max_prec:
            t = target(prec)
            hits = []
            with ctx.workprec(prec):
                for p in candidates:
                    if p.degree == 1:
                        r = to_acb(-p.coeffs[0] / p.coeffs[1])
                        if r.overlaps(t):
                            hits.append((p, r))
                        continue
                    for r, _ in p.to_flint().complex_roots():
                        if r.overlaps(t):
                            hits.append((p, r))
            if len(hits) == 1:
                p, r = hits[0]
                return cls(p, r, prec)
            if not hits:
                raise InvalidInput("target enclosure meets no candidate root")
            prec *= 2
        raise PrecisionExhausted("could not isolate algebraic number within precision cap")

    # -- basic queries -----------------------------------------------------

    @property
    def is_real(self) -> bool:
        return self.ball.imag.is_zero()

    def box(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """Rational isolating box ((re_lo, re_hi), (im_lo, im_hi))."""
        return arb_to_interval(self.ball.real), arb_to_interval(self.ball.imag)

    def strict_box(self, prec: int | None = None):
        """A box with re_lo < re_hi (and im likewise unless the number is real)."""
        z = self.enclosure(prec or self.precision)
        (a, b), (c, d) = arb_to_interval(z.real), arb_to_interval(z.imag)
        eps = Fraction(1, 2 ** (prec or self.precision))
        if a == b:
            a, b = a - eps, b + eps
        if not self.is_real and c == d:
            c, d = c - eps, d + eps
        return (a, b), (c, d)

    def enclosure(self, prec: int) -> acb:
        """Rigorous ball of width about 2**-prec."""
        if prec <= self.precision:
            return self.ball
        hit = self._cache.get(prec)
        if hit is not None:
            return hit
        p = self.defining_poly
        if p.degree == 1:
            z = to_acb(-p.coeffs[0] / p.coeffs[1])
        else:
            work = prec + 16
            while True:
                with ctx.workprec(work):
                    roots = [r for r, _ in p.to_flint().complex_roots() if r.overlaps(self.ball)]
                if len(roots) == 1:
                    z = roots[0]
                    break
                if work > 4 * MAX_PREC:
                    raise PrecisionExhausted("root refinement failed")
                work *= 2
        self._cache[prec] = z
        return z

    def refine(self, bits: int) -> "AlgebraicNumber":
        return AlgebraicNumber(self.defining_poly, self.enclosure(bits), max(bits, self.precision))

    @property
    def minimal_poly(self) -> PolyQ:
        m = self._cache.get("minpoly")
        if m is None:
            if self.defining_poly.degree == 1:
                m = self.defining_poly.monic()
            else:
                facs = self.defining_poly.factor()
                m = facs[0] if len(facs) == 1 else AlgebraicNumber.select(facs, self.enclosure).defining_poly
            self._cache["minpoly"] = m
        return m

    def as_minimal(self) -> "AlgebraicNumber":
        m = self.minimal_poly
        if m == self.defining_poly:
            return self
        return AlgebraicNumber(m, self.ball, self.precision)

    def companion(self) -> fmpq_mat:
        return companion_matrix(self.minimal_poly)

    def is_rational(self) -> bool:
        return self.minimal_poly.degree == 1

    def rational_value(self) -> Fraction:
        m = self.minimal_poly
        if m.degree != 1:
            raise InvalidInput("not rational")
        return -m.coeffs[0] / m.coeffs[1]

    def is_zero(self) -> bool:
        return self.minimal_poly == PolyQ([0, 1])

    def same_as(self, other: "AlgebraicNumber") -> bool:
        """Exact equality test."""
        if self.minimal_poly != other.minimal_poly:
            return False
        m = self.minimal_poly
        if m.degree == 1:
            return True
        prec = START_PREC
        while prec <= MAX_PREC:
            with ctx.workprec(prec):
                roots = [r for r, _ in m.to_flint().complex_roots()]
            a = [i for i, r in enumerate(roots) if r.overlaps(self.enclosure(prec))]
            b = [i for i, r in enumerate(roots) if r.overlaps(other.enclosure(prec))]
            if len(a) == 1 and len(b) == 1:
                return a == b
            prec *= 2
        raise PrecisionExhausted("equality undecided")

    # -- arithmetic (exact, via companion matrices) ------------------------

    def conjugate(self) -> "AlgebraicNumber":
        if self.is_real:
            return self
        return AlgebraicNumber(self.defining_poly, self.ball.conjugate(), self.precision)

    def __mul__(self, other: "AlgebraicNumber") -> "AlgebraicNumber":
        other = _as_alg(other)
        a, b = self.as_minimal(), other.as_minimal()
        if a.is_rational():
            return b.scale(a.rational_value())
        if b.is_rational():
            return a.scale(b.rational_value())
        m = kron(a.companion(), b.companion())
        return _from_matrix(m, lambda prec: a.enclosure(prec) * b.enclosure(prec))

    __rmul__ = __mul__

    def __add__(self, other: "AlgebraicNumber") -> "AlgebraicNumber":
        other = _as_alg(other)
        a, b = self.as_minimal(), other.as_minimal()
        if a.is_rational() and b.is_rational():
            return AlgebraicNumber.rational(a.rational_value() + b.rational_value())
        ca, cb = a.companion(), b.companion()
        m = kron(ca, _eye(cb.nrows())) + kron(_eye(ca.nrows()), cb)
        return _from_matrix(m, lambda prec: a.enclosure(prec) + b.enclosure(prec))

    def __neg__(self):
        return self.scale(Fraction(-1))

    def scale(self, q: Fraction) -> "AlgebraicNumber":
        q = Fraction(q)
        if q == 0:
            return AlgebraicNumber.rational(0)
        m = self.minimal_poly
        # root of m(x/q)
        p = PolyQ(c * q ** (m.degree - i) for i, c in enumerate(m.coeffs)).monic()
        qa = to_acb(q)
        base = self
        return AlgebraicNumber.select([p], lambda prec: base.enclosure(prec) * qa)

    def inverse(self) -> "AlgebraicNumber":
        m = self.minimal_poly
        if m.coeffs[0] == 0:
            raise DivisionByZero("inverse of zero")
        p = PolyQ(reversed(m.coeffs)).monic()
        base = self
        return AlgebraicNumber.select([p], lambda prec: 1 / base.enclosure(prec))

    def __truediv__(self, other):
        return self * _as_alg(other).inverse()

    def __pow__(self, k: int) -> "AlgebraicNumber":
        if k == 0:
            return AlgebraicNumber.rational(1)
        if k < 0:
            return self.inverse() ** (-k)
        if k == 1:
            return self
        a = self.as_minimal()
        if a.is_rational():
            return AlgebraicNumber.rational(a.rational_value() ** k)
        m = a.companion() ** k
        return _from_matrix(m, lambda prec: a.enclosure(prec + 2 * k.bit_length()) ** k)

    def abs_squared(self) -> "AlgebraicNumber":
        if self.is_real:
            return self * self
        return self * self.conjugate()

    def unit_part(self) -> "AlgebraicNumber":
        """``self / |self|`` as an algebraic number on the unit circle."""
        if self.is_zero():
            raise DivisionByZero("unit part of zero")
        if self.is_real:
            return AlgebraicNumber.rational(1 if self.enclosure(START_PREC).real > 0 else -1)
        sq = self / self.conjugate()  # = (self/|self|)**2
        cand = sq.minimal_poly.substitute_power(2).factor()
        base = self
        return AlgebraicNumber.select(cand, lambda prec: _unit(base.enclosure(prec)))

    def __repr__(self):
        return f"AlgebraicNumber({self.minimal_poly if 'minpoly' in self._cache else self.defining_poly}, {self.ball})"


def _unit(z: acb) -> acb:
    return z / abs(z)


def _as_alg(x) -> AlgebraicNumber:
    return x if isinstance(x, AlgebraicNumber) else AlgebraicNumber.rational(x)


def _eye(n: int) -> fmpq_mat:
    m = fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def companion_matrix(p: PolyQ) -> fmpq_mat:
    """Companion matrix whose characteristic polynomial is monic(p)."""
    p = p.monic()
    d = p.degree
    m = fmpq_mat(d, d)
    for i in range(1, d):
        m[i, i - 1] = 1
    for i in range(d):
        c = -p.coeffs[i]
        m[i, d - 1] = fmpq(c.numerator, c.denominator)
    return m


def kron(a: fmpq_mat, b: fmpq_mat) -> fmpq_mat:
    ra, ca, rb, cb = a.nrows(), a.ncols(), b.nrows(), b.ncols()
    out = fmpq_mat(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            aij = a[i, j]
            if aij == 0:
                continue
            for k in range(rb):
                for l in range(cb):
                    bkl = b[k, l]
                    if bkl != 0:
                        out[i * rb + k, j * cb + l] = aij * bkl
    return out


def charpoly(m: fmpq_mat) -> PolyQ:
    return PolyQ.from_flint(m.charpoly())


def _from_matrix(m: fmpq_mat, target) -> AlgebraicNumber:
    if m.nrows() > MAX_MATRIX_DIM:
        raise PrecisionExhausted(f"algebraic arithmetic too large (dimension {m.nrows()})")
    return AlgebraicNumber.select(charpoly(m).factor(), target)


# ---------------------------------------------------------------------------
# operations named in the module contract


def isolate_roots(p: PolyQ, min_bits: int = 64) -> list[AlgebraicNumber]:
    """Isolating balls for every complex root of a squarefree ``p``.

    Real roots come first (sorted); non-real roots follow in conjugate pairs
    ``(z, conj z)`` with positive imaginary part first.
    """
    if p.is_zero():
        raise InvalidInput("zero polynomial")
    if not poly_squarefree(p):
        raise InvalidInput(f"polynomial is not squarefree (repeated factor {repeated_factor(p)})")
    if p.degree == 0:
        return []
    prec = max(min_bits + 8, START_PREC)
    with ctx.workprec(prec):
        raw = [r for r, _ in p.to_flint().complex_roots()]
    real = sorted((r for r in raw if r.imag.is_zero()), key=lambda r: float(r.real.mid()))
    upper = [r for r in raw if not r.imag.is_zero() and r.imag > 0]
    upper.sort(key=lambda r: (float(r.real.mid()), float(r.imag.mid())))
    out = [AlgebraicNumber(p, r, prec) for r in real]
    for r in upper:
        conj = next(c for c in raw if c.overlaps(r.conjugate()))
        out.append(AlgebraicNumber(p, r, prec))
        out.append(AlgebraicNumber(p, conj, prec))
    if len(out) != p.degree:
        raise PrecisionExhausted("root isolation incomplete")
    return out


def conjugate_index(roots: Sequence[AlgebraicNumber]) -> list[int]:
    """Index of the complex conjugate of each root (itself for real roots)."""
    out = []
    for r in roots:
        if r.is_real:
            out.append(roots.index(r))
            continue
        c = r.ball.conjugate()
        out.append(next(i for i, s in enumerate(roots) if s.ball.overlaps(c) and s.defining_poly == r.defining_poly))
    return out


def ratio_min_poly(alpha: AlgebraicNumber, beta: AlgebraicNumber) -> tuple[PolyQ, AlgebraicNumber]:
    """Minimal polynomial and isolated value of ``alpha / beta``.

    The candidate polynomial is Res_y(g(y), f(x*y)), obtained as the
    characteristic polynomial of kron(C_f, C_g^{-1}); the factor containing
    the ratio is selected by ball membership.
    """
    if beta.is_zero():
        raise DivisionByZero("ratio with zero denominator")
    q = alpha / beta
    return q.minimal_poly, q


def _totient(n: int) -> int:
    result, k, m = n, 2, n
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def root_of_unity_order(alpha: AlgebraicNumber) -> int | None:
    """Least k with alpha**k == 1, or None if alpha is not a root of unity."""
    if alpha.is_zero():
        raise InvalidInput("zero is not a root of unity")
    m = alpha.minimal_poly
    if any(c.denominator != 1 for c in m.coeffs) or abs(m.coeffs[0]) != 1:
        return None
    deg = m.degree
    # phi(k) >= sqrt(k/2), so phi(k) <= deg forces k <= 2*deg**2
    for k in range(1, 2 * deg * deg + 3):
        if _totient(k) > deg:
            continue
        xk = PolyQ([-1] + [0] * (k - 1) + [1])
        if (xk % m).is_zero():
            with ctx.workprec(START_PREC):
                if (alpha.enclosure(START_PREC) ** k).overlaps(acb(1)):
                    return k
    return None


def compare_modulus(alpha: AlgebraicNumber, beta: AlgebraicNumber) -> int:
    """Exact three-way comparison of |alpha| and |beta| (-1, 0, +1)."""
    a, b = alpha.abs_squared(), beta.abs_squared()
    if a.same_as(b):
        return 0
    prec = START_PREC
    while prec <= MAX_PREC:
        with ctx.workprec(prec):
            x, y = a.enclosure(prec).real, b.enclosure(prec).real
            if x < y:
                return -1
            if x > y:
                return 1
        prec *= 2
    raise PrecisionExhausted("modulus comparison undecided")


# ---------------------------------------------------------------------------
# number fields Q[x]/(m)


@dataclass(frozen=True)
class NumberFieldElement:
    modulus: PolyQ
    representation: PolyQ

    def __post_init__(self):
        if self.modulus.degree < 1:
            raise InvalidInput("modulus must have positive degree")
        object.__setattr__(self, "representation", self.representation % self.modulus)

    @classmethod
    def in_field(cls, modulus: PolyQ, rep) -> "NumberFieldElement":
        if not modulus.is_irreducible():
            raise InvalidInput(f"modulus {modulus} is reducible")
        return cls(modulus, rep if isinstance(rep, PolyQ) else PolyQ(rep))

    def is_zero(self) -> bool:
        return self.representation.is_zero()

    def evaluate(self, generator: acb) -> acb:
        return self.representation(generator)


def nf_op(a: NumberFieldElement, b: NumberFieldElement | None, op: str) -> NumberFieldElement:
    """Field arithmetic in Q[x]/(modulus); ``op`` is add, mul or inv (b ignored)."""
    if op == "inv":
        if a.is_zero():
            raise DivisionByZero("inverse of zero in number field")
        g, s, _ = a.representation.to_flint().xgcd(a.modulus.to_flint())
        s = PolyQ.from_flint(s)
        g = PolyQ.from_flint(g)
        return NumberFieldElement(a.modulus, s * PolyQ([1 / g.coeffs[0]]))
    if b is None or a.modulus != b.modulus:
        raise InvalidInput("number field modulus mismatch")
    if op == "add":
        return NumberFieldElement(a.modulus, a.representation + b.representation)
    if op == "mul":
        return NumberFieldElement(a.modulus, a.representation * b.representation)
    raise InvalidInput(f"unknown number field op {op!r}")


def lcm(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)
