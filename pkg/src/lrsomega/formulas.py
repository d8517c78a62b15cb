"""First-order formulas over the reals describing the torus, the sets U(w'),
and the covering statements Phi(B); SMT-LIB 2 emission and an external
solver client.

Algebraic constants never appear as decimals: each is a fresh variable pinned
down by its defining polynomial and a strict rational box.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraicNumber, PolyQ
from .errors import CertifiedUnsupported, InvalidInput, SolverProtocolError

# ---------------------------------------------------------------------------
# sparse multivariate polynomials over Q

Monomial = tuple[tuple[str, int], ...]


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def __add__(self, other):
        other = _P(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_P(other))

    def __rsub__(self, other):
        return _P(other) - self

    def __mul__(self, other):
        other = _P(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, env: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= Fraction(env[v]) ** e
            total += t
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]))

    def __repr__(self):
        return f"Poly({to_sexpr(self)})"


def _P(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


# complex expressions as (re, im) pairs of Poly


def cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def cpow(a, k: int):
    out = (Poly.const(1), Poly.const(0))
    for _ in range(k):
        out = cmul(out, a)
    return out


def cpoly_eval(p: PolyQ, z):
    acc = (Poly.const(0), Poly.const(0))
    for c in reversed(p.coeffs):
        acc = cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


# ---------------------------------------------------------------------------
# formula AST


@dataclass(frozen=True)
class BoolConst:
    value: bool


TRUE, FALSE = BoolConst(True), BoolConst(False)


@dataclass(frozen=True)
class Cmp:
    op: str  # '>', '<', '='
    poly: Poly

    def __post_init__(self):
        if self.op not in (">", "<", "="):
            raise InvalidInput(f"bad comparison {self.op!r}")


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Implies:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class ForAll:
    variables: tuple[str, ...]
    body: object


@dataclass(frozen=True)
class Exists:
    variables: tuple[str, ...]
    body: object


RealFormula = BoolConst | Cmp | And | Or | Not | Implies | ForAll | Exists


def gt(p) -> Cmp:
    return Cmp(">", _P(p))


def lt(p) -> Cmp:
    return Cmp("<", _P(p))


def eq(p) -> Cmp:
    return Cmp("=", _P(p))


def conj(*fs) -> RealFormula:
    out = []
    for f in fs:
        if isinstance(f, And):
            out.extend(f.args)
        elif f == FALSE:
            return FALSE
        elif f != TRUE:
            out.append(f)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs) -> RealFormula:
    out = []
    for f in fs:
        if isinstance(f, Or):
            out.extend(f.args)
        elif f == TRUE:
            return TRUE
        elif f != FALSE:
            out.append(f)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def free_variables(f) -> set[str]:
    if isinstance(f, Cmp):
        return f.poly.variables()
    if isinstance(f, (And, Or)):
        return set().union(*(free_variables(a) for a in f.args))
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, Implies):
        return free_variables(f.lhs) | free_variables(f.rhs)
    if isinstance(f, (ForAll, Exists)):
        return free_variables(f.body) - set(f.variables)
    return set()


def is_quantified(f) -> bool:
    if isinstance(f, (ForAll, Exists)):
        return True
    if isinstance(f, (And, Or)):
        return any(is_quantified(a) for a in f.args)
    if isinstance(f, Not):
        return is_quantified(f.arg)
    if isinstance(f, Implies):
        return is_quantified(f.lhs) or is_quantified(f.rhs)
    return False


def evaluate(f, env: Mapping[str, Fraction]) -> bool:
    """Exact truth value of a quantifier-free formula at a rational point."""
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, Cmp):
        v = f.poly.evaluate(env)
        return v > 0 if f.op == ">" else v < 0 if f.op == "<" else v == 0
    if isinstance(f, And):
        return all(evaluate(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, env) for a in f.args)
    if isinstance(f, Not):
        return not evaluate(f.arg, env)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, env)) or evaluate(f.rhs, env)
    raise InvalidInput("cannot evaluate a quantified formula")


# ---------------------------------------------------------------------------
# SMT-LIB 2 text


def _num(c: Fraction) -> str:
    mag = abs(c)
    s = str(mag.numerator) if mag.denominator == 1 else f"(/ {mag.numerator} {mag.denominator})"
    return f"(- {s})" if c < 0 else s


def to_sexpr(p: Poly) -> str:
    terms = []
    for m, c in p.sorted_terms():
        factors = [v for v, e in m for _ in range(e)]
        if not factors:
            terms.append(_num(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")")
        else:
            terms.append("(* " + " ".join([_num(c)] + factors) + ")")
    if not terms:
        return "0"
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def formula_sexpr(f) -> str:
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, Cmp):
        return f"({f.op} {to_sexpr(f.poly)} 0)"
    if isinstance(f, And):
        return "(and " + " ".join(formula_sexpr(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(formula_sexpr(a) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"(not {formula_sexpr(f.arg)})"
    if isinstance(f, Implies):
        return f"(=> {formula_sexpr(f.lhs)} {formula_sexpr(f.rhs)})"
    if isinstance(f, (ForAll, Exists)):
        q = "forall" if isinstance(f, ForAll) else "exists"
        binds = " ".join(f"({v} Real)" for v in f.variables)
        return f"({q} ({binds}) {formula_sexpr(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def to_smtlib(f, comment: str | None = None) -> str:
    logic = "NRA" if is_quantified(f) else "QF_NRA"
    lines = []
    if comment:
        lines += [f"; {line}" for line in comment.splitlines()]
    lines.append(f"(set-logic {logic})")
    for v in sorted(free_variables(f)):
        lines.append(f"(declare-fun {v} () Real)")
    lines.append(f"(assert {formula_sexpr(f)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _tokenize(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split(";", 1)[0]
        out.extend(line.replace("(", " ( ").replace(")", " ) ").split())
    return out


def _read(tokens: list[str], i: int):
    if tokens[i] == "(":
        lst = []
        i += 1
        while tokens[i] != ")":
            x, i = _read(tokens, i)
            lst.append(x)
        return lst, i + 1
    return tokens[i], i + 1


def parse_sexprs(text: str) -> list:
    toks = _tokenize(text)
    out, i = [], 0
    while i < len(toks):
        x, i = _read(toks, i)
        out.append(x)
    return out


def _poly_of(e) -> Poly:
    if isinstance(e, str):
        try:
            return Poly.const(Fraction(e))
        except ValueError:
            return Poly.var(e)
    head, args = e[0], [_poly_of(a) for a in e[1:]]
    if head == "+":
        out = Poly.const(0)
        for a in args:
            out = out + a
        return out
    if head == "-":
        return -args[0] if len(args) == 1 else args[0] - sum(args[1:], Poly.const(0))
    if head == "*":
        out = Poly.const(1)
        for a in args:
            out = out * a
        return out
    if head == "/":
        if not all(a.is_const() for a in args) or args[1].const_value() == 0:
            raise SolverProtocolError("non-constant division")
        return Poly.const(args[0].const_value() / args[1].const_value())
    raise SolverProtocolError(f"unknown term head {head!r}")


def _formula_of(e):
    if e == "true":
        return TRUE
    if e == "false":
        return FALSE
    head = e[0]
    if head in (">", "<", "="):
        lhs, rhs = _poly_of(e[1]), _poly_of(e[2])
        return Cmp(head, lhs - rhs)
    if head == "and":
        return conj(*(_formula_of(a) for a in e[1:]))
    if head == "or":
        return disj(*(_formula_of(a) for a in e[1:]))
    if head == "not":
        return Not(_formula_of(e[1]))
    if head == "=>":
        return Implies(_formula_of(e[1]), _formula_of(e[2]))
    if head in ("forall", "exists"):
        vs = tuple(b[0] for b in e[1])
        body = _formula_of(e[2])
        return ForAll(vs, body) if head == "forall" else Exists(vs, body)
    raise SolverProtocolError(f"unknown formula head {head!r}")


def parse_smtlib(text: str):
    """Conjunction of the asserted formulas in an SMT-LIB script."""
    asserted = [_formula_of(cmd[1]) for cmd in parse_sexprs(text) if isinstance(cmd, list) and cmd and cmd[0] == "assert"]
    return conj(*asserted)


# ---------------------------------------------------------------------------
# torus description


def torus_formula(basis: Iterable[Sequence[int]], d: int, names: Sequence[tuple[str, str]] | None = None):
    """Unit circles for each coordinate plus prod z_i**b_i = 1 for every basis vector b."""
    names = names or [(f"x{i + 1}", f"y{i + 1}") for i in range(d)]
    zs = [(Poly.var(x), Poly.var(y)) for x, y in names]
    parts = [eq(x * x + y * y - 1) for x, y in zs]
    for b in basis:
        lhs = (Poly.const(1), Poly.const(0))
        rhs = (Poly.const(1), Poly.const(0))
        for z, e in zip(zs, b):
            if e > 0:
                lhs = cmul(lhs, cpow(z, e))
            elif e < 0:
                rhs = cmul(rhs, cpow(z, -e))
        parts.append(eq(lhs[0] - rhs[0]))
        parts.append(eq(lhs[1] - rhs[1]))
    return conj(*parts)


# ---------------------------------------------------------------------------
# exact constants for one analysed LRS


def _coarse_box(alg: AlgebraicNumber, bits: int):
    """Outward-rounded strict box on the 2**-bits grid."""
    import math

    (a, b), (c, d) = alg.strict_box()
    g = Fraction(1, 1 << bits)

    def lo(x):
        return Fraction(math.floor(x / g) - 1) * g

    def hi(x):
        return Fraction(math.ceil(x / g) + 1) * g

    return (lo(a), hi(b)), (lo(c), hi(d))


def isolating_boxes(roots, start_bits: int = 16):
    """Pairwise-disjoint strict rational boxes, as coarse as possible (doubling from start_bits)."""
    bits = start_bits
    while True:
        boxes = [_coarse_box(r, bits) for r in roots]
        ok = all(
            bx[0][1] <= by[0][0] or by[0][1] <= bx[0][0] or bx[1][1] <= by[1][0] or by[1][1] <= bx[1][0]
            for i, bx in enumerate(boxes) for by in boxes[i + 1:]
        )
        if ok or bits >= 120:
            return boxes
        bits *= 2


def _box_constraints(xv: Poly, yv: Poly | None, box):
    (a, b), (c, d) = box
    parts = [gt(xv - a), lt(xv - b)]
    if yv is not None:
        parts += [gt(yv - c), lt(yv - d)]
    return parts


class Encoding:
    """Variables and defining constraints for the roots, coefficients and
    normalized roots of an analysed LRS, plus the torus over its active
    normalized roots.  Needs an irreducible characteristic polynomial."""

    def __init__(self, analysis, exponent_bound: int = 64, prefix: str = ""):
        from .torus import relation_basis

        self.analysis = analysis
        G = analysis.exact_coeffs
        if G is None:
            raise CertifiedUnsupported(
                "certified mode needs an irreducible characteristic polynomial (exact coefficients unavailable)"
            )
        f = analysis.lrs.char_poly()
        self.prefix = prefix
        cons = []
        roots = []
        boxes = isolating_boxes(analysis.roots)
        for i, r in enumerate(analysis.roots):
            x = Poly.var(f"{prefix}root{i}_re")
            if r.is_real:
                z = (x, Poly.const(0))
                cons.append(eq(cpoly_eval(f, z)[0]))
                cons += _box_constraints(x, None, boxes[i])
            else:
                y = Poly.var(f"{prefix}root{i}_im")
                z = (x, y)
                re, im = cpoly_eval(f, z)
                cons += [eq(re), eq(im)]
                cons += _box_constraints(x, y, boxes[i])
            roots.append(z)
        coeffs = [cpoly_eval(G.representation, z) for z in roots]
        P = analysis.period
        self.active = analysis.active_groups
        self.lams = {}
        for j in self.active:
            rep = roots[analysis.groups[j][0]]
            M = cpow(rep, P)
            p, q, r = (Poly.var(f"{prefix}lam{j}_re"), Poly.var(f"{prefix}lam{j}_im"), Poly.var(f"{prefix}mod{j}"))
            cons += [eq(p * p + q * q - 1), eq(M[0] - r * p), eq(M[1] - r * q), gt(r)]
            self.lams[j] = (p, q)
        self.block = {}
        for l in range(P):
            for j in analysis.dominant[l]:
                s = (Poly.const(0), Poly.const(0))
                for i in analysis.groups[j]:
                    s = cadd(s, cmul(coeffs[i], cpow(roots[i], l + 1)))
                bv = (Poly.var(f"{prefix}b{l}_{j}_re"), Poly.var(f"{prefix}b{l}_{j}_im"))
                cons += [eq(bv[0] - s[0]), eq(bv[1] - s[1])]
                self.block[(l, j)] = bv
        self.constants = conj(*cons)
        self.zero_offsets = frozenset(l for l in range(P) if not analysis.dominant[l])
        self.torus_names = [(f"{prefix}z{k}_re", f"{prefix}z{k}_im") for k in range(len(self.active))]
        self.basis = relation_basis([analysis.normalized[j] for j in self.active], exponent_bound)

    @property
    def torus_variables(self) -> tuple[str, ...]:
        return tuple(v for pair in self.torus_names for v in pair)

    def torus(self):
        return torus_formula(self.basis.vectors, len(self.active), self.torus_names)

    def _point(self):
        return {j: (Poly.var(x), Poly.var(y)) for j, (x, y) in zip(self.active, self.torus_names)}

    def in_U(self, target: str, shift: int = 0):
        """s^shift(z) lies in U(target), z being the torus variables."""
        P = self.analysis.period
        if len(target) % P:
            raise InvalidInput(f"block word length {len(target)} is not a multiple of {P}")
        z = self._point()
        parts = []
        for k in range(len(target) // P):
            for l in range(P):
                want = target[k * P + l]
                if l in self.zero_offsets:
                    if want != "0":
                        return FALSE
                    continue
                if want == "0":
                    return FALSE
                val = (Poly.const(0), Poly.const(0))
                for j in self.analysis.dominant[l]:
                    term = cmul(self.block[(l, j)], cmul(cpow(self.lams[j], k + shift), z[j]))
                    val = cadd(val, term)
                parts.append(gt(val[0]) if want == "+" else lt(val[0]))
        return conj(*parts)

    def u_formula(self, targets: str | Sequence[str]):
        """Satisfiable iff some target's U-set meets the torus (free variables are existential)."""
        targets = [targets] if isinstance(targets, str) else list(targets)
        return conj(self.constants, self.torus(), disj(*(self.in_U(t) for t in targets)))

    def phi_formula(self, targets: str | Sequence[str], B: int):
        """Every torus point reaches the union of U-sets within 1..B steps (B = 0: U covers the torus)."""
        targets = [targets] if isinstance(targets, str) else list(targets)
        shifts = [0] if B == 0 else range(1, B + 1)
        body = disj(*(self.in_U(t, k) for k in shifts for t in targets))
        return conj(self.constants, ForAll(self.torus_variables, Implies(self.torus(), body)))

    def phi_refutation(self, targets: str | Sequence[str], B: int):
        """Quantifier-free formula that is unsatisfiable iff phi_formula(targets, B) holds."""
        targets = [targets] if isinstance(targets, str) else list(targets)
        shifts = [0] if B == 0 else range(1, B + 1)
        body = disj(*(self.in_U(t, k) for k in shifts for t in targets))
        return conj(self.constants, self.torus(), Not(body))


def u_formula(target, analysis, exponent_bound: int = 64):
    return Encoding(analysis, exponent_bound).u_formula(target)


def phi_formulas(target, analysis, B: int, exponent_bound: int = 64):
    return Encoding(analysis, exponent_bound).phi_formula(target, B)


# ---------------------------------------------------------------------------
# solver client


@dataclass(frozen=True)
class SolverResult:
    status: str  # sat / unsat / unknown
    reason: str = ""


def find_solver(explicit: str | None = None) -> str | None:
    """--solver flag, then LRSOMEGA_SOLVER, then z3 or cvc5 on PATH."""
    for cand in (explicit, os.environ.get("LRSOMEGA_SOLVER")):
        if cand:
            return shutil.which(cand) or (cand if os.path.exists(cand) else None)
    for name in ("z3", "cvc5"):
        path = shutil.which(name)
        if path:
            return path
    return None


def solver_check(f, solver: str | None = None, timeout: float = 60.0) -> SolverResult:
    path = find_solver(solver)
    if path is None:
        return SolverResult("unknown", "solver binary not found")
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False, encoding="utf-8") as fh:
        fh.write(to_smtlib(f))
        name = fh.name
    try:
        proc = subprocess.run([path, name], capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return SolverResult("unknown", f"timeout after {timeout:g}s")
    except OSError as exc:
        return SolverResult("unknown", f"cannot run solver: {exc}")
    finally:
        os.unlink(name)
    lines = [ln.strip() for ln in proc.stdout.splitlines() if ln.strip()]
    if lines and lines[0] in ("sat", "unsat", "unknown"):
        return SolverResult(lines[0], "" if lines[0] != "unknown" else "solver returned unknown")
    raise SolverProtocolError(f"unexpected solver output: {(proc.stdout + proc.stderr).strip()[:200]!r}")
