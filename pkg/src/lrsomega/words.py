"""Words over sign alphabets and the pattern-recurrence oracle interface.

Internally a word is a ``str`` with one character per letter.  For the plain
sign alphabet the characters are '-', '0', '+'; for an m-track product
alphabet each tuple of signs is mapped to a single private character by
:class:`SignAlphabet`.  Positions are 0-based.
"""

from __future__ import annotations

import itertools
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInput

SIGNS = "-0+"


class SignAlphabet:
    """Tuples of m signs, each encoded as one character."""

    def __init__(self, tracks: int = 1):
        if tracks < 1:
            raise InvalidInput("need at least one track")
        self.tracks = tracks
        if tracks == 1:
            self._enc = {(s,): s for s in SIGNS}
        else:
            self._enc = {t: chr(0x2100 + i) for i, t in enumerate(itertools.product(SIGNS, repeat=tracks))}
        self._dec = {c: t for t, c in self._enc.items()}

    @property
    def letters(self) -> list[str]:
        return list(self._dec)

    def encode(self, signs: Sequence[str]) -> str:
        try:
            return self._enc[tuple(signs)]
        except KeyError:
            raise InvalidInput(f"not a letter of the {self.tracks}-track alphabet: {signs!r}") from None

    def decode(self, ch: str) -> tuple[str, ...]:
        return self._dec[ch]

    def letter_name(self, ch: str) -> str:
        t = self.decode(ch)
        return t[0] if self.tracks == 1 else "(" + ",".join(t) + ")"

    def parse_letter(self, text: str) -> str:
        text = text.strip()
        if self.tracks == 1:
            if text in SIGNS and len(text) == 1:
                return text
            raise InvalidInput(f"bad sign letter {text!r}")
        m = re.fullmatch(r"\(([^()]*)\)", text)
        if not m:
            raise InvalidInput(f"bad tuple letter {text!r}")
        return self.encode([s.strip() for s in m.group(1).split(",")])

    def parse(self, text: str) -> str:
        """Parse a pattern: '+-0' for one track, '(+,0,-)(-,-,+)' for several."""
        if self.tracks == 1:
            bad = set(text) - set(SIGNS)
            if bad:
                raise InvalidInput(f"bad characters {sorted(bad)} in pattern {text!r}")
            return text
        parts = re.findall(r"\([^()]*\)", text)
        if "".join(parts) != re.sub(r"\s+", "", text):
            raise InvalidInput(f"malformed tuple pattern {text!r}")
        return "".join(self.parse_letter(p) for p in parts)

    def render(self, word: str) -> str:
        if self.tracks == 1:
            return word
        return "".join(self.letter_name(c) for c in word)

    def zip_tracks(self, tracks: Sequence[str]) -> str:
        return "".join(self._enc[t] for t in zip(*tracks))

    def track(self, word: str, k: int) -> str:
        return "".join(self._dec[c][k] for c in word)


SIGN_ALPHABET = SignAlphabet(1)


# ---------------------------------------------------------------------------
# oracle answers


@dataclass(frozen=True)
class Yes:
    bound: int
    provenance: str = "exact"


@dataclass(frozen=True)
class No:
    threshold: int
    provenance: str = "exact"


@dataclass(frozen=True)
class Unknown:
    reason: str


@dataclass(frozen=True)
class Recurs:
    separators: frozenset
    prefix_len: int
    provenance: str = "exact"


@dataclass(frozen=True)
class InterNo:
    provenance: str = "exact"


def occurrences(text: str, w: str, start: int = 0, stop: int | None = None) -> list[int]:
    """Start positions p (start <= p < stop) of possibly overlapping occurrences of w."""
    if not w:
        raise InvalidInput("empty pattern")
    stop = len(text) if stop is None else stop
    out = []
    find = text.find
    i = find(w, start)
    while i != -1 and i < stop:
        out.append(i)
        i = find(w, i + 1)
    return out


def separators_from(text: str, w: str, starts: Iterable[int], occ: Sequence[int]) -> set[str]:
    """For each start i, the gap word between i's occurrence and the next non-overlapping one.

    Occurrences whose successor is not visible in ``text`` are skipped.
    """
    import bisect

    out = set()
    n = len(w)
    for i in starts:
        k = bisect.bisect_left(occ, i + n)
        if k < len(occ):
            out.add(text[i + n : occ[k]])
    return out


@dataclass(frozen=True)
class GapStatistics:
    positions: list[int]
    gaps: list[int]
    max_gap: int
    count: int


def gap_statistics(prefix: str, w: str) -> GapStatistics:
    pos = occurrences(prefix, w)
    gaps = [b - a for a, b in zip(pos, pos[1:])]
    return GapStatistics(pos, gaps, max(gaps, default=0), len(pos))


def running_max_gaps(prefix: str, w: str) -> list[tuple[int, int]]:
    """(position, gap) each time the gap between consecutive occurrences sets a new record."""
    out = []
    best = 0
    pos = occurrences(prefix, w)
    for a, b in zip(pos, pos[1:]):
        if b - a > best:
            best = b - a
            out.append((b, best))
    return out


# ---------------------------------------------------------------------------
# ultimately periodic words


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    prefix: str
    cycle: str

    def __post_init__(self):
        if not self.cycle:
            raise InvalidInput("cycle must be nonempty")

    def letter_at(self, n: int) -> str:
        p = len(self.prefix)
        return self.prefix[n] if n < p else self.cycle[(n - p) % len(self.cycle)]

    def take(self, n: int) -> str:
        p = len(self.prefix)
        if n <= p:
            return self.prefix[:n]
        reps = -(-(n - p) // len(self.cycle))
        return (self.prefix + self.cycle * reps)[:n]

    def __iter__(self) -> Iterator[str]:
        yield from self.prefix
        yield from itertools.cycle(self.cycle)


def up_occurs_infinitely(alpha: UltimatelyPeriodicWord, w: str) -> Yes | No:
    """Exact recurrence test; bound is the least p such that every length-p window
    (of the whole word) contains an occurrence start."""
    if not w:
        raise InvalidInput("empty pattern")
    p, c = len(alpha.prefix), len(alpha.cycle)
    text = alpha.take(p + 2 * c + len(w))
    occ = occurrences(text, w, 0, p + 2 * c)
    periodic = [i for i in occ if i >= p]
    if not periodic:
        return No(occ[-1] + 1 if occ else 0)
    gaps = [b - a for a, b in zip(occ, occ[1:])]
    return Yes(max([occ[0] + 1] + gaps))


def up_inter(alpha: UltimatelyPeriodicWord, w: str) -> Recurs | InterNo:
    """Separator set of w, independent of where the factorization starts.

    S collects, for every occurrence i in the periodic part, the gap word
    between i and the next occurrence not overlapping it.
    """
    if not w:
        raise InvalidInput("empty pattern")
    p, c = len(alpha.prefix), len(alpha.cycle)
    text = alpha.take(p + 3 * c + 3 * len(w))
    occ = occurrences(text, w)
    starts = [i for i in occ if p <= i < p + c]
    if not starts:
        return InterNo()
    return Recurs(frozenset(separators_from(text, w, starts, occ)), starts[0])


def up_separator_sequence(alpha: UltimatelyPeriodicWord, w: str, count: int) -> tuple[int, list[str]]:
    """Greedy factorization alpha = r w s1 w s2 ...: returns (|r|, [s1, ..., s_count])."""
    res = up_inter(alpha, w)
    if isinstance(res, InterNo):
        raise InvalidInput("pattern does not recur")
    i = res.prefix_len
    out = []
    n = len(w)
    while len(out) < count:
        text = alpha.take(i + n + len(alpha.cycle) + 2 * n)
        j = text.find(w, i + n)
        out.append(text[i + n : j])
        i = j
    return res.prefix_len, out


class WordOracle(ABC):
    """Pattern-recurrence queries on an infinite word."""

    alphabet: SignAlphabet

    @abstractmethod
    def letter_at(self, n: int) -> str: ...

    @abstractmethod
    def occurs_infinitely(self, w: str) -> Yes | No | Unknown: ...

    @abstractmethod
    def inter(self, w: str) -> Recurs | InterNo | Unknown: ...

    def letters(self) -> list[str]:
        return self.alphabet.letters


class UpWordOracle(WordOracle):
    def __init__(self, alpha: UltimatelyPeriodicWord, alphabet: SignAlphabet = SIGN_ALPHABET):
        self.alpha = alpha
        self.alphabet = alphabet

    def letter_at(self, n: int) -> str:
        return self.alpha.letter_at(n)

    def occurs_infinitely(self, w: str):
        return up_occurs_infinitely(self.alpha, w)

    def inter(self, w: str):
        return up_inter(self.alpha, w)
