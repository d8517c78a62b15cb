"""Characteristic-root analysis of a simple LRS.

For a simple LRS u with nonzero characteristic roots L_1..L_m the degeneracy
period P is the lcm of the orders of those ratios L_i/L_j that are roots of
unity.  Grouping roots with equal P-th power gives distinct values M_j and,
writing position p = kP + l of the 0-based sign word,

    u_{p+1} = sum_j b_{l,j} M_j**k,     b_{l,j} = sum_{i in group j} c_i L_i**(l+1)

so each step-P subsequence is non-degenerate.  Its dominant part (largest
|M_j| among the j with b_{l,j} != 0) decides the sign for large k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from flint import acb, acb_mat, arb, ctx, fmpq, fmpq_mat

from .algebra import (
    MAX_PREC,
    START_PREC,
    AlgebraicNumber,
    NumberFieldElement,
    PolyQ,
    compare_modulus,
    isolate_roots,
    lcm,
    repeated_factor,
    root_of_unity_order,
    to_acb,
)
from .errors import InvalidInput, NotSimple, PrecisionExhausted
from .lrs_core import Lrs, Sign, is_identically_zero, minimize, sign_at, subsequence, terms


def zero_offsets(u: Lrs, P: int) -> frozenset[int]:
    """Offsets l in 0..P-1 whose step-P subsequence is identically zero."""
    return frozenset(l for l in range(P) if is_identically_zero(subsequence(u, l, P)))


def _abs_disjoint(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    with ctx.workprec(START_PREC):
        x, y = abs(a.enclosure(START_PREC)), abs(b.enclosure(START_PREC))
        return not x.overlaps(y)


@dataclass
class SpectrumAnalysis:
    lrs: Lrs  # minimized
    transient: int  # 0 or 1: exponential-polynomial form holds for n > transient
    roots: list[AlgebraicNumber]  # nonzero characteristic roots
    period: int
    groups: list[tuple[int, ...]]  # root indices with equal P-th power, one group per M_j
    present: list[tuple[int, ...]]  # J_l: groups with nonzero coefficient at offset l
    dominant: list[tuple[int, ...]]  # J'_l
    zero_offsets: frozenset[int]
    ratio_orders: dict[tuple[int, int], int | None]
    _balls: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return self.lrs.order

    @property
    def active_groups(self) -> list[int]:
        """Groups dominant at some offset, in increasing order."""
        return sorted({j for js in self.dominant for j in js})

    @cached_property
    def powers(self) -> list[AlgebraicNumber]:
        """M_j = L_rep**P per group."""
        return [self.roots[g[0]] ** self.period for g in self.groups]

    @cached_property
    def normalized(self) -> list[AlgebraicNumber]:
        """lambda_j = M_j / |M_j| per group."""
        return [m.unit_part() for m in self.powers]

    # -- ball data ---------------------------------------------------------

    def coefficient_enclosures(self, prec: int = START_PREC) -> list[acb]:
        """c_i with u_n = sum_i c_i L_i**n for n > transient."""
        key = ("c", prec)
        if key not in self._balls:
            r = len(self.roots)
            t = self.transient
            vals = terms(self.lrs, t + r)[t:]
            with ctx.workprec(prec + 32):
                lam = [x.enclosure(prec + 32) for x in self.roots]
                V = acb_mat(r, r)
                for row in range(r):
                    for col in range(r):
                        V[row, col] = lam[col] ** (t + 1 + row)
                rhs = acb_mat(r, 1, [to_acb(v) for v in vals])
                try:
                    sol = V.solve(rhs)
                except ZeroDivisionError as exc:
                    raise PrecisionExhausted("Vandermonde solve failed") from exc
                self._balls[key] = [sol[i, 0] for i in range(r)]
        return self._balls[key]

    def block_coefficients(self, prec: int = START_PREC) -> list[list[acb]]:
        """b[l][j]: coefficient of M_j**k at sign-word position kP + l."""
        key = ("b", prec)
        if key not in self._balls:
            c = self.coefficient_enclosures(prec)
            with ctx.workprec(prec + 32):
                lam = [x.enclosure(prec + 32) for x in self.roots]
                out = []
                for l in range(self.period):
                    row = []
                    for g in self.groups:
                        s = acb(0)
                        for i in g:
                            s += c[i] * lam[i] ** (l + 1)
                        row.append(s)
                    out.append(row)
            self._balls[key] = out
        return self._balls[key]

    def normalized_balls(self, prec: int = START_PREC) -> list[acb]:
        key = ("lam", prec)
        if key not in self._balls:
            with ctx.workprec(prec + 32):
                out = []
                for g in self.groups:
                    m = self.roots[g[0]].enclosure(prec + 32) ** self.period
                    out.append(m / abs(m))
            self._balls[key] = out
        return self._balls[key]

    # -- exact coefficients --------------------------------------------------

    @cached_property
    def exact_coeffs(self) -> NumberFieldElement | None:
        """G in Q[x]/(f) with c_i = G(L_i), when f is irreducible (else None)."""
        f = self.lrs.char_poly()
        if self.transient or not f.is_irreducible():
            return None
        d = f.degree
        C = self.lrs.companion()
        # power sums p_m = Tr(C**m)
        psums = []
        Ck = C
        for _ in range(2 * d):
            psums.append(sum((Ck[i, i] for i in range(d)), fmpq(0)))
            Ck = Ck * C
        A = fmpq_mat(d, d)
        for row in range(d):  # equation for u_{row+1}
            for k in range(d):
                A[row, k] = psums[k + row]  # Tr(x**k * x**(row+1)) = p_{k+row+1}
        rhs = fmpq_mat(d, 1, [fmpq(x.numerator, x.denominator) for x in self.lrs.initial])
        g = A.solve(rhs)
        rep = PolyQ(Fraction(int(g[k, 0].p), int(g[k, 0].q)) for k in range(d))
        return NumberFieldElement(f, rep)

    def summary(self) -> dict:
        return {
            "order": self.order,
            "period": self.period,
            "zero_offsets": sorted(self.zero_offsets),
            "roots": [str(r.ball) for r in self.roots],
            "dominant": {l: [list(self.groups[j]) for j in js] for l, js in enumerate(self.dominant)},
            "ratio_orders": {f"{i},{j}": o for (i, j), o in self.ratio_orders.items() if o is not None},
        }


def _split_transient(m: Lrs) -> tuple[int, PolyQ]:
    f = m.char_poly()
    if f.coeffs and f.coeffs[0] == 0:
        return 1, PolyQ(f.coeffs[1:])
    return 0, f


def degeneracy_period(roots: list[AlgebraicNumber]) -> tuple[int, dict]:
    orders: dict[tuple[int, int], int | None] = {}
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if _abs_disjoint(roots[i], roots[j]):
                orders[(i, j)] = None
                continue
            orders[(i, j)] = root_of_unity_order(roots[i] / roots[j])
    return lcm(o for o in orders.values() if o), orders


def analyze(u: Lrs, precision: int = START_PREC, period: int | None = None) -> SpectrumAnalysis:
    m = minimize(u)
    f = m.char_poly()
    if is_identically_zero(m):
        P = period or 1
        return SpectrumAnalysis(m, 0, [], P, [], [()] * P, [()] * P, frozenset(range(P)), {})
    if f.gcd(f.derivative()).degree > 0:
        raise NotSimple(f"LRS is not simple: repeated factor {repeated_factor(f)} in characteristic polynomial {f}")
    t, g = _split_transient(m)
    roots = isolate_roots(g, precision) if g.degree > 0 else []
    P0, orders = degeneracy_period(roots)
    if period is None:
        P = P0
    else:
        if period % P0:
            raise InvalidInput(f"forced period {period} is not a multiple of the degeneracy period {P0}")
        P = period

    # equal P-th powers <=> ratio is a root of unity of order dividing P
    groups: list[list[int]] = []
    for i in range(len(roots)):
        for grp in groups:
            o = orders.get((grp[0], i))
            if o is not None and P % o == 0:
                grp.append(i)
                break
        else:
            groups.append([i])
    groups_t = [tuple(gp) for gp in groups]

    Z = zero_offsets(m, P)
    present, dominant = [], []
    for l in range(P):
        sub = subsequence(m, l, P)
        if is_identically_zero(sub):
            present.append(())
            dominant.append(())
            continue
        sp = sub.char_poly()
        js = []
        for j, gp in enumerate(groups_t):
            mj = (roots[gp[0]] ** P).minimal_poly
            if (sp % mj).is_zero():
                js.append(j)
        present.append(tuple(js))
        dominant.append(tuple(_max_modulus(js, groups_t, roots)))
    return SpectrumAnalysis(m, t, roots, P, groups_t, present, dominant, Z, orders)


def _max_modulus(js, groups, roots) -> list[int]:
    best: list[int] = []
    for j in js:
        if not best:
            best = [j]
            continue
        a, b = roots[groups[j][0]], roots[groups[best[0]][0]]
        c = compare_modulus(a, b)
        if c > 0:
            best = [j]
        elif c == 0:
            best.append(j)
    return best


class Predictor:
    """Dominant-part sign prediction; thread-safe apart from the shared ball cache."""

    def __init__(self, u: Lrs, analysis: SpectrumAnalysis, max_prec: int = MAX_PREC):
        self.u = analysis.lrs
        self.analysis = analysis
        self.max_prec = max_prec

    def dominant_value(self, n: int, prec: int) -> arb:
        a = self.analysis
        pos = n - 1
        k, l = divmod(pos, a.period)
        b = a.block_coefficients(prec)[l]
        lam = a.normalized_balls(prec)
        with ctx.workprec(prec + 32):
            s = acb(0)
            for j in a.dominant[l]:
                s += b[j] * lam[j] ** k
        return s.real

    def predict(self, n: int) -> Sign | None:
        """Sign of u_n predicted from the dominant part; None means Unknown."""
        if n < 1:
            raise InvalidInput("index must be positive")
        a = self.analysis
        if n <= a.transient:
            return sign_at(self.u, n)
        l = (n - 1) % a.period
        if not a.dominant[l]:
            return Sign.ZERO
        prec = START_PREC
        while prec <= self.max_prec:
            v = self.dominant_value(n, prec)
            if v > 0:
                return Sign.PLUS
            if v < 0:
                return Sign.MINUS
            prec *= 2
        return None


def dominant_sign_predictor(u: Lrs, analysis: SpectrumAnalysis | None = None) -> Predictor:
    return Predictor(u, analysis or analyze(u))
