"""Pattern-recurrence oracle for sign descriptions of simple LRS.

Horizon mode answers from the exact sign word, trusting occurrences found
past ``trust_threshold``; certified mode decides recurrence by satisfiability
of the semi-algebraic set U(w') on the torus via an external solver.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import MAX_PREC, lcm
from .errors import CertifiedUnsupported, InvalidInput
from .lrs_core import Lrs, TermStream, minimize
from .spectrum import SpectrumAnalysis, analyze
from .words import (
    SignAlphabet,
    InterNo,
    No,
    Recurs,
    Unknown,
    WordOracle,
    Yes,
    occurrences,
    separators_from,
)

log = logging.getLogger(__name__)

EXACT = "exact"
HEURISTIC = "heuristic-threshold"
CERTIFIED = "certified"
SCAN = "exact-scan"


@dataclass
class LrsWordConfig:
    horizon: int = 200_000
    trust_threshold: int | None = None  # None: max(2*d*P, 1000)
    mode: str = "horizon"  # or "certified"
    max_prec: int = MAX_PREC
    horizon_cap: int | None = None  # inter doubling limit; None: 16 * horizon
    solver: str | None = None
    solver_timeout: float = 60.0
    exponent_bound: int = 64
    max_certified_b: int = 64
    max_completions: int = 256

    def __post_init__(self):
        if self.mode not in ("horizon", "certified"):
            raise InvalidInput(f"unknown mode {self.mode!r}")
        if self.horizon < 1:
            raise InvalidInput("horizon must be positive")

    def threshold_for(self, d: int, P: int) -> int:
        t = self.trust_threshold if self.trust_threshold is not None else max(2 * d * P, 1000)
        if self.horizon <= t:
            raise InvalidInput(f"horizon {self.horizon} must exceed the trust threshold {t}")
        return t


def _completions(w: str, P: int, Z, alphabet: SignAlphabet):
    if not w:
        raise InvalidInput("empty pattern")
    zs = [frozenset(z) for z in Z] if alphabet.tracks > 1 else [frozenset(Z)]
    if len(zs) != alphabet.tracks:
        raise InvalidInput("one zero-offset set per track required")
    slot = []
    for l in range(P):
        per = [("0",) if l in z else ("-", "+") for z in zs]
        slot.append(sorted(alphabet.encode(t) for t in itertools.product(*per)))
    for o in range(P):
        if any(c not in slot[(o + i) % P] for i, c in enumerate(w)):
            continue
        m = -(-(o + len(w)) // P)
        free = [k for k in range(m * P) if not o <= k < o + len(w)]
        for fill in itertools.product(*(slot[k % P] for k in free)):
            word = [""] * (m * P)
            word[o : o + len(w)] = w
            for k, c in zip(free, fill):
                word[k] = c
            yield "".join(word), o


def lift_pattern(w: str, P: int, Z, alphabet: SignAlphabet | None = None, limit: int | None = None) -> list[str]:
    """Block-aligned completions of w with zeros exactly on the zero offsets.

    ``Z`` is one set of offsets, or one set per track for product alphabets.
    Returns words of length m*P (m blocks); [] iff no completion exists.
    With ``limit`` set, enumeration stops after that many completions.
    """
    out: dict[str, None] = {}
    for s, _ in _completions(w, P, Z, alphabet or SignAlphabet(1)):
        out.setdefault(s)
        if limit is not None and len(out) >= limit:
            break
    return list(out)


def lift_alignments(w: str, P: int, Z, alphabet: SignAlphabet | None = None) -> dict[str, set[int]]:
    """Completion -> offsets at which it was built around w."""
    out: dict[str, set[int]] = {}
    for s, o in _completions(w, P, Z, alphabet or SignAlphabet(1)):
        out.setdefault(s, set()).add(o)
    return out


class LrsWordOracle(WordOracle):
    """Oracle for the (product) sign description of one or more simple LRS."""

    def __init__(self, seqs: Lrs | Sequence[Lrs], cfg: LrsWordConfig | None = None):
        self.seqs = [seqs] if isinstance(seqs, Lrs) else list(seqs)
        if not self.seqs:
            raise InvalidInput("no sequences")
        self.cfg = cfg or LrsWordConfig()
        self.alphabet = SignAlphabet(len(self.seqs))
        base = [analyze(u) for u in self.seqs]  # raises NotSimple
        self.period = lcm(a.period for a in base)
        self.analyses: list[SpectrumAnalysis] = [
            a if a.period == self.period else analyze(u, period=self.period) for a, u in zip(base, self.seqs)
        ]
        self.zero_offsets = [a.zero_offsets for a in self.analyses]
        d = max(minimize(u).order for u in self.seqs)
        self.threshold = self.cfg.threshold_for(d, self.period)
        self._streams = [TermStream(u) for u in self.seqs]
        self._word = ""
        self.provenance: list[tuple[str, str]] = []

    # -- sign word -----------------------------------------------------------

    def word(self, n: int) -> str:
        """The first n letters, computed exactly and cached."""
        if n > len(self._word):
            k = n - len(self._word)
            tracks = [s.signs(k) for s in self._streams]
            self._word += tracks[0] if len(tracks) == 1 else self.alphabet.zip_tracks(tracks)
        return self._word[:n]

    def letter_at(self, n: int) -> str:
        return self.word(n + 1)[n]

    def _lift(self, w: str, limit=None) -> list[str]:
        Z = self.zero_offsets[0] if len(self.seqs) == 1 else self.zero_offsets
        return lift_pattern(w, self.period, Z, self.alphabet, limit)

    def _check_pattern(self, w: str):
        if not w:
            raise InvalidInput("empty pattern")
        bad = set(w) - set(self.alphabet.letters)
        if bad:
            raise InvalidInput(f"pattern uses letters outside the alphabet: {sorted(bad)}")

    def _note(self, w: str, label: str):
        self.provenance.append((self.alphabet.render(w), label))

    # -- queries -------------------------------------------------------------

    def occurs_infinitely(self, w: str):
        self._check_pattern(w)
        if not self._lift(w, limit=1):
            H = self.cfg.horizon
            occ = occurrences(self.word(H), w, 0, H - len(w) + 1)
            self._note(w, EXACT)
            return No(occ[-1] + 1 if occ else 0, EXACT)
        if self.cfg.mode == "certified":
            return self._occurs_certified(w)
        return self._occurs_horizon(w)

    def _occurs_horizon(self, w: str):
        H, T = self.cfg.horizon, self.threshold
        text = self.word(H)
        E = H - len(w)
        occ = occurrences(text, w, 0, E + 1)
        post = [i for i in occ if i >= T]
        self._note(w, HEURISTIC)
        if not post:
            return No(occ[-1] + 1 if occ else 0, HEURISTIC)
        gaps = [b - a for a, b in zip(post, post[1:])]
        return Yes(max([post[0] - T + 1, E - post[-1] + 1] + gaps), HEURISTIC)

    def _occurs_certified(self, w: str):
        from . import formulas

        if len(self.seqs) != 1:
            return Unknown("certified mode supports a single sequence")
        solver = formulas.find_solver(self.cfg.solver)
        if solver is None:
            return Unknown("no SMT solver configured (set --solver or LRSOMEGA_SOLVER)")
        comps = self._lift(w, limit=self.cfg.max_completions + 1)
        if len(comps) > self.cfg.max_completions:
            return Unknown(f"more than {self.cfg.max_completions} block completions")
        a = self.analyses[0]
        try:
            enc = formulas.Encoding(a, self.cfg.exponent_bound)
        except CertifiedUnsupported as exc:
            return Unknown(str(exc))
        align = lift_alignments(w, self.period, self.zero_offsets[0], self.alphabet)
        sat = []
        for c in comps:
            r = formulas.solver_check(enc.u_formula(c), solver, self.cfg.solver_timeout)
            if r.status == "sat":
                sat.append(c)
            elif r.status != "unsat":
                return Unknown(f"solver: {r.reason or r.status}")
        self._note(w, CERTIFIED)
        if not sat:
            H = min(self.cfg.horizon, 10_000)
            occ = occurrences(self.word(H), w, 0, H - len(w) + 1)
            return No(occ[-1] + 1 if occ else 0, CERTIFIED)
        B = recurrence_bound_certified(enc, sat, self.cfg, solver)
        if B is None:
            return Unknown("no certified recurrence bound found")
        offs = [o for c in sat for o in align[c]]
        return Yes(B * self.period + max(offs) - min(offs), CERTIFIED)

    def inter(self, w: str):
        r = self.occurs_infinitely(w)
        if isinstance(r, Unknown):
            return r
        if isinstance(r, No):
            return InterNo(r.provenance)
        T = self.threshold
        H = self.cfg.horizon
        cap = self.cfg.horizon_cap or 16 * self.cfg.horizon
        prev = None
        while True:
            text = self.word(H)
            occ = occurrences(text, w)
            starts = [i for i in occ if i >= T]
            cur = frozenset(separators_from(text, w, starts, occ))
            if prev is not None and cur == prev:
                return Recurs(cur, starts[0], HEURISTIC)
            if 2 * H > cap:
                return Unknown(f"separator set not stable up to horizon {H}")
            prev = cur
            H *= 2


def recurrence_bound_certified(enc, completions: Sequence[str], cfg: LrsWordConfig, solver: str) -> int | None:
    """First B in 1, 2, 4, ... with Phi(B) valid; returned in blocks (multiply by P for positions)."""
    from . import formulas

    B = 1
    while B <= cfg.max_certified_b:
        r = formulas.solver_check(enc.phi_refutation(completions, B), solver, cfg.solver_timeout)
        if r.status == "unsat":
            return B
        if r.status != "sat":
            return None
        B *= 2
    return None


def lrs_oracle(seqs, **kw) -> LrsWordOracle:
    return LrsWordOracle(seqs, LrsWordConfig(**kw))
