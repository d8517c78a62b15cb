"""Orbit of s(z) = (z_1 lambda_1, ..., z_d lambda_d) on the subgroup of the torus cut
out by the multiplicative relations of lambda."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from flint import acb, arb, ctx, fmpz_mat

from .algebra import MAX_PREC, START_PREC, AlgebraicNumber
from .errors import PrecisionExhausted


@dataclass(frozen=True)
class RelationBasis:
    vectors: tuple[tuple[int, ...], ...]
    dimension: int
    complete: bool = True  # False: some candidate could not be verified
    ball_certified: bool = False  # some vector verified by balls only

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)


def _angles(lams: Sequence[AlgebraicNumber], prec: int) -> list[arb]:
    with ctx.workprec(prec + 16):
        out = []
        for lam in lams:
            z = lam.enclosure(prec + 16)
            out.append(z.arg() / (2 * arb.pi()))
        return out


def _verify_exact(lams: Sequence[AlgebraicNumber], v: Sequence[int]) -> bool:
    acc = AlgebraicNumber.rational(1)
    for lam, e in zip(lams, v):
        if e:
            acc = acc * (lam**e)
    return acc.is_rational() and acc.rational_value() == 1


def _verify_balls(lams: Sequence[AlgebraicNumber], v: Sequence[int]) -> bool:
    prec = START_PREC
    while prec <= 4096:
        with ctx.workprec(prec):
            acc = acb(1)
            for lam, e in zip(lams, v):
                if e:
                    acc *= lam.enclosure(prec) ** e
            if not acc.overlaps(acb(1)):
                return False
        prec *= 2
    return True


def verify_relation(lams: Sequence[AlgebraicNumber], v: Sequence[int]) -> str | None:
    """'exact' or 'balls' if prod lam_i**v_i = 1 is confirmed, else None."""
    if not _verify_balls(lams, v):
        return None
    try:
        return "exact" if _verify_exact(lams, v) else None
    except PrecisionExhausted:
        return "balls"


def _independent(vectors: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for v in vectors:
        if not out or fmpz_mat(out + [v]).rank() == len(out) + 1:
            out.append(v)
    return out


def relation_basis(lams: Sequence[AlgebraicNumber], exponent_bound: int = 64) -> RelationBasis:
    """Integer relations prod lam_i**v_i = 1 with |v_i| <= exponent_bound.

    Candidates come from LLL on the lattice spanned by (e_j, round(C*theta_j))
    and (0, C), theta_j = arg(lam_j)/2pi; each candidate is then verified.
    """
    d = len(lams)
    if d == 0:
        return RelationBasis((), 0)
    bits = max(4 * exponent_bound * d, 64)
    complete = True
    balls_only = False
    for _attempt in range(4):
        th = _angles(lams, bits)
        C = 1 << bits
        rows = []
        for j in range(d):
            e = [0] * (d + 1)
            e[j] = 1
            e[d] = int((th[j] * C).mid().floor().unique_fmpz())
            rows.append(e)
        rows.append([0] * d + [C])
        red = fmpz_mat(rows).lll()
        cands = []
        for i in range(red.nrows()):
            v = tuple(int(red[i, j]) for j in range(d))
            tail = abs(int(red[i, d]))
            if any(v) and max(map(abs, v)) <= exponent_bound and tail <= 2 * d * (exponent_bound + 1):
                cands.append(v)
        verified = []
        complete = True
        for v in cands:
            how = verify_relation(lams, v)
            if how is None:
                complete = False
                continue
            balls_only |= how == "balls"
            verified.append(_normalize(v))
        if complete:
            return RelationBasis(tuple(_independent(verified)), d, True, balls_only)
        bits *= 2
    return RelationBasis(tuple(_independent(verified)), d, False, balls_only)


def _normalize(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


# ---------------------------------------------------------------------------
# orbit


@dataclass(frozen=True)
class OrbitPoint:
    coords: tuple[acb, ...]
    step: int
    precision: int

    def widths(self) -> list[float]:
        return [float(max(z.real.rad(), z.imag.rad())) for z in self.coords]


class Torus:
    def __init__(self, lams: Sequence[AlgebraicNumber], basis: RelationBasis | None = None, exponent_bound: int = 64):
        self.lams = list(lams)
        self.exponent_bound = exponent_bound
        self._basis = basis
        self._balls: dict[int, list[acb]] = {}

    @property
    def dimension(self) -> int:
        return len(self.lams)

    @property
    def basis(self) -> RelationBasis:
        if self._basis is None:
            self._basis = relation_basis(self.lams, self.exponent_bound)
        return self._basis

    def lam_balls(self, prec: int) -> list[acb]:
        if prec not in self._balls:
            self._balls[prec] = [lam.enclosure(prec + 16) for lam in self.lams]
        return self._balls[prec]

    def orbit_point(self, n: int, precision: int = START_PREC) -> OrbitPoint:
        if n < 0:
            raise ValueError("orbit step must be non-negative")
        if n == 0:
            return OrbitPoint(tuple(acb(1) for _ in self.lams), 0, precision)
        work = precision + 2 * max(n.bit_length(), 1) + 16
        with ctx.workprec(work):
            pts = tuple(z**n for z in self.lam_balls(work))
        return OrbitPoint(pts, n, precision)

    def contains(self, coords: Sequence[acb]) -> bool:
        """Ball test of the defining equations (possibly-in, not a proof)."""
        for z in coords:
            if not abs(z).overlaps(arb(1)):
                return False
        for v in self.basis:
            acc = acb(1)
            for z, e in zip(coords, v):
                if e:
                    acc *= z**e
            if not acc.overlaps(acb(1)):
                return False
        return True


# ---------------------------------------------------------------------------
# sign map f on the torus and the open sets U(w')


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


@dataclass
class LinearSignMap:
    """Block sign map: at offset l the value is Re sum_j coeff[l][j] * z[index[l][j]].

    ``coeffs(prec)`` returns rigorous balls for the coefficients; ``zero_offsets``
    are the offsets where the map is identically zero.
    """

    period: int
    zero_offsets: frozenset[int]
    index: list[tuple[int, ...]]
    coeffs: Callable[[int], list[list[acb]]]
    _cache: dict = field(default_factory=dict, repr=False)

    def coeff_balls(self, prec: int) -> list[list[acb]]:
        if prec not in self._cache:
            self._cache[prec] = self.coeffs(prec)
        return self._cache[prec]

    def values(self, coords: Sequence[acb], prec: int) -> list[arb | None]:
        """Per-offset real value balls; None on zero offsets."""
        cs = self.coeff_balls(prec)
        out: list[arb | None] = []
        with ctx.workprec(prec + 16):
            for l in range(self.period):
                if l in self.zero_offsets:
                    out.append(None)
                    continue
                s = acb(0)
                for c, j in zip(cs[l], self.index[l]):
                    s += c * coords[j]
                out.append(s.real)
        return out


def sign_map_from_analysis(analysis) -> tuple[LinearSignMap, list[int]]:
    """Sign map over the active groups; returns (map, active group ids in torus order)."""
    active = analysis.active_groups
    pos = {j: k for k, j in enumerate(active)}
    index = [tuple(pos[j] for j in analysis.dominant[l]) for l in range(analysis.period)]
    Z = frozenset(l for l in range(analysis.period) if not analysis.dominant[l])

    def coeffs(prec: int) -> list[list[acb]]:
        b = analysis.block_coefficients(prec)
        return [[b[l][j] for j in analysis.dominant[l]] for l in range(analysis.period)]

    return LinearSignMap(analysis.period, Z, index, coeffs), active


def _check_block(vals: list[arb | None], block: str, zero_offsets) -> Membership:
    verdict = Membership.IN
    for l, (v, want) in enumerate(zip(vals, block)):
        if l in zero_offsets:
            if want != "0":
                return Membership.OUT
            continue
        if v is None:
            return Membership.UNKNOWN
        got = "+" if v > 0 else "-" if v < 0 else None
        if got is None:
            verdict = Membership.UNKNOWN
        elif want == "0" or got != want:
            return Membership.OUT
    return verdict


def membership_U(
    target: str,
    sign_map: LinearSignMap,
    torus: Torus,
    step: int | None = None,
    point: Sequence[acb] | None = None,
    max_prec: int = MAX_PREC,
) -> Membership:
    """Is the point (orbit step ``step`` or explicit ``point``) in U(target)?"""
    P = sign_map.period
    if len(target) % P:
        raise ValueError(f"block word length {len(target)} is not a multiple of {P}")
    blocks = [target[i : i + P] for i in range(0, len(target), P)]
    prec = START_PREC
    while True:
        verdict = Membership.IN
        for k, block in enumerate(blocks):
            if point is None:
                coords = torus.orbit_point(step + k, prec).coords
            else:
                lam = torus.lam_balls(prec)
                with ctx.workprec(prec + 16):
                    coords = [z * l**k for z, l in zip(point, lam)]
            r = _check_block(sign_map.values(coords, prec), block, sign_map.zero_offsets)
            if r is Membership.OUT:
                return r
            if r is Membership.UNKNOWN:
                verdict = r
        if verdict is Membership.IN or point is not None or prec >= max_prec:
            return verdict
        prec *= 2


def empirical_bound(target: str, sign_map: LinearSignMap, torus: Torus, horizon: int, max_prec: int = 1024) -> int | None:
    """Largest gap between consecutive certified In steps among 0..horizon."""
    hits = [n for n in range(horizon + 1) if membership_U(target, sign_map, torus, step=n, max_prec=max_prec) is Membership.IN]
    if len(hits) < 2:
        return None
    return max(b - a for a, b in zip(hits, hits[1:]))


def arc_coverage(lam: AlgebraicNumber, width: float, spacing: float, horizon: int) -> tuple[bool, int]:
    """Does every arc [a, a+width) with a on the spacing grid receive some lam**n, n <= horizon?

    Returns (all covered, largest first-hit step over the grid).
    """
    tau = 2 * math.pi
    starts = [k * spacing for k in range(int(math.ceil(tau / spacing)))]
    first = [None] * len(starts)
    torus = Torus([lam])
    for n in range(horizon + 1):
        z = torus.orbit_point(n).coords[0]
        a = float(z.arg().mid()) % tau
        for i, s in enumerate(starts):
            if first[i] is None and (a - s) % tau < width:
                first[i] = n
        if all(f is not None for f in first):
            break
    ok = all(f is not None for f in first)
    return ok, max((f for f in first if f is not None), default=0)
