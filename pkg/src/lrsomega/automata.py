"""Deterministic Muller automata, their transition monoid, and the fixpoint
model-checking procedure driven by a pattern-recurrence oracle."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import AlphabetMismatch, InvalidInput, MalformedOracle
from .words import InterNo, No, Recurs, SignAlphabet, UltimatelyPeriodicWord, Unknown, WordOracle, Yes

ACCEPT, REJECT, UNKNOWN = "Accept", "Reject", "Unknown"


@dataclass
class MullerAutomaton:
    states: list[str]
    initial: str
    alphabet: list[str]  # letters as written in the JSON ("+", "(+,0,-)", ...)
    delta: dict[str, dict[str, str]]
    accepting: list[frozenset[str]]

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise InvalidInput("duplicate state names")
        if self.initial not in self.states:
            raise InvalidInput(f"initial state {self.initial!r} is not a state")
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise InvalidInput("alphabet must be nonempty without duplicates")
        for q in self.states:
            row = self.delta.get(q)
            if row is None:
                raise InvalidInput(f"no transitions from {q!r}")
            for a in self.alphabet:
                if a not in row:
                    raise InvalidInput(f"transition from {q!r} on {a!r} missing (automaton must be complete)")
                if row[a] not in self.states:
                    raise InvalidInput(f"transition {q!r} --{a}--> unknown state {row[a]!r}")
            extra = set(row) - set(self.alphabet)
            if extra:
                raise InvalidInput(f"transitions from {q!r} on letters outside the alphabet: {sorted(extra)}")
        self.accepting = [frozenset(S) for S in self.accepting]
        for S in self.accepting:
            if not S <= set(self.states):
                raise InvalidInput(f"accepting set {sorted(S)} mentions unknown states")
        reach = {self.initial}
        todo = [self.initial]
        while todo:
            q = todo.pop()
            for a in self.alphabet:
                r = self.delta[q][a]
                if r not in reach:
                    reach.add(r)
                    todo.append(r)
        if reach != set(self.states):
            raise InvalidInput(f"unreachable states: {sorted(set(self.states) - reach)}")
        self._index = {q: i for i, q in enumerate(self.states)}
        self._family = {self.mask(S) for S in self.accepting}
        self._letters: dict[str, str] = {}
        self._table: dict[str, tuple[int, ...]] = {}

    @classmethod
    def from_json(cls, obj) -> "MullerAutomaton":
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"malformed automaton JSON ({exc})") from exc
        try:
            return cls(
                list(obj["states"]), obj["initial"], list(obj["alphabet"]),
                {q: dict(row) for q, row in obj["delta"].items()},
                [frozenset(S) for S in obj["accepting"]],
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"automaton JSON missing or bad field: {exc}") from exc

    @classmethod
    def load(cls, path) -> "MullerAutomaton":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> str:
        return json.dumps({
            "states": self.states, "initial": self.initial, "alphabet": self.alphabet,
            "delta": self.delta, "accepting": [sorted(S) for S in self.accepting],
        })

    @property
    def size(self) -> int:
        return len(self.states)

    def mask(self, S) -> int:
        m = 0
        for q in S:
            m |= 1 << self._index[q]
        return m

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(q for i, q in enumerate(self.states) if m >> i & 1)

    def accepts_set(self, S) -> bool:
        return (S if isinstance(S, int) else self.mask(S)) in self._family

    def bind(self, alphabet: SignAlphabet | None):
        """Map automaton letters onto the oracle's encoded letters; raises on mismatch.

        ``None`` binds each single-character letter to itself (no word alphabet).
        """
        if alphabet is None:
            if any(len(a) != 1 for a in self.alphabet):
                raise InvalidInput("letters must be single characters to be used unbound")
            self._letters = {a: a for a in self.alphabet}
            self._table = {a: tuple(self._index[self.delta[q][a]] for q in self.states) for a in self.alphabet}
            return
        letters = {}
        for a in self.alphabet:
            try:
                letters[alphabet.parse_letter(a)] = a
            except InvalidInput as exc:
                raise AlphabetMismatch(f"automaton letter {a!r} is not in the word alphabet") from exc
        if set(letters) != set(alphabet.letters):
            missing = [alphabet.letter_name(c) for c in alphabet.letters if c not in letters]
            raise AlphabetMismatch(f"automaton alphabet lacks letters {missing}")
        self._letters = letters
        self._table = {
            c: tuple(self._index[self.delta[q][a]] for q in self.states) for c, a in letters.items()
        }

    def step_table(self, ch: str) -> tuple[int, ...]:
        if not self._table:
            self.bind(_alphabet_for(self.alphabet))
        try:
            return self._table[ch]
        except KeyError:
            raise InvalidInput(f"unknown letter {ch!r}") from None

    def run(self, word: str, start: int | None = None) -> int:
        q = self._index[self.initial] if start is None else start
        for ch in word:
            q = self.step_table(ch)[q]
        return q


def _alphabet_for(letters: Sequence[str]) -> SignAlphabet | None:
    """The sign alphabet the letters spell out exactly, else None (unbound)."""
    first = letters[0].strip()
    tracks = first.count(",") + 1 if first.startswith("(") else 1
    al = SignAlphabet(tracks)
    try:
        parsed = {al.parse_letter(a) for a in letters}
    except InvalidInput:
        return None
    return al if parsed == set(al.letters) else None


# ---------------------------------------------------------------------------
# transition monoid


@dataclass(frozen=True)
class MonoidElement:
    """For each state q: the state reached, and the set (bitmask) of states seen on the way."""

    target: tuple[int, ...]
    seen: tuple[int, ...]

    def __mul__(self, other: "MonoidElement") -> "MonoidElement":
        t = tuple(other.target[self.target[q]] for q in range(len(self.target)))
        s = tuple(self.seen[q] | other.seen[self.target[q]] for q in range(len(self.target)))
        return MonoidElement(t, s)

    def edges(self, A: MullerAutomaton):
        """(source, label, target) triples with state names."""
        return [(A.states[q], A.unmask(self.seen[q]), A.states[self.target[q]]) for q in range(len(self.target))]


def identity(n: int) -> MonoidElement:
    return MonoidElement(tuple(range(n)), tuple(1 << q for q in range(n)))


def monoid_letter(A: MullerAutomaton, ch: str) -> MonoidElement:
    t = A.step_table(ch)
    return MonoidElement(t, tuple((1 << q) | (1 << t[q]) for q in range(A.size)))


def monoid_embed(A: MullerAutomaton, word: str) -> MonoidElement:
    x = identity(A.size)
    for ch in word:
        x = x * monoid_letter(A, ch)
    return x


def monoid_product(x: MonoidElement, y: MonoidElement) -> MonoidElement:
    return x * y


def is_increasing(xs: Sequence[MonoidElement]) -> bool:
    if len(xs) < 2:
        raise InvalidInput("an increasing product needs at least two factors")
    total = xs[0]
    for y in xs[1:]:
        total = total * y
    first = xs[0]
    return any(first.seen[q] != total.seen[q] for q in range(len(first.seen)))  # seen only grows


def adjacent_increasing_pair(xs: Sequence[MonoidElement]) -> int | None:
    """Index i with xs[i]*xs[i+1] increasing, found along a witnessing path of the whole
    product: the factor before the first label not inside the first factor's label.
    Every window xs[r..r'] with r <= i < r' is then increasing too."""
    if len(xs) < 2 or not is_increasing(xs):
        return None
    first = xs[0]
    for q in range(len(first.seen)):
        s1 = first.seen[q]
        p = first.target[q]
        for j in range(1, len(xs)):
            if xs[j].seen[p] & ~s1:
                return j - 1
            p = xs[j].target[p]
    return None


# ---------------------------------------------------------------------------
# model checking


@dataclass
class CheckResult:
    verdict: str
    word: str = ""
    seen: frozenset = frozenset()
    iterations: int = 0
    reason: str = ""
    trace: list = field(default_factory=list)


def model_check(oracle: WordOracle, A: MullerAutomaton, max_pattern: int = 1 << 16) -> CheckResult:
    """Decide whether the oracle's word is accepted by a prefix-independent Muller automaton."""
    A.bind(oracle.alphabet)
    w = None
    for a in A.alphabet:
        ch = oracle.alphabet.parse_letter(a)
        r = oracle.occurs_infinitely(ch)
        if isinstance(r, Unknown):
            return CheckResult(UNKNOWN, reason=f"occurs_infinitely({a}): {r.reason}")
        if isinstance(r, Yes):
            w = ch
            break
    if w is None:
        raise MalformedOracle("no letter occurs infinitely often")

    hw = monoid_embed(A, w)
    iterations = 0
    trace = [w]
    while True:
        inter = oracle.inter(w)
        if isinstance(inter, Unknown):
            return CheckResult(UNKNOWN, w, iterations=iterations, reason=f"inter: {inter.reason}")
        if isinstance(inter, InterNo):
            raise MalformedOracle("pattern reported recurring has no separators")
        seps = sorted(inter.separators, key=lambda s: (len(s), s))
        hs = {s: monoid_embed(A, s) for s in seps}
        found = None
        for si in seps:
            for sj in seps:
                if not is_increasing([hw, hs[si], hw, hs[sj]]):
                    continue
                cand = w + si + w + sj
                if len(cand) > max_pattern:
                    return CheckResult(UNKNOWN, w, iterations=iterations, reason="pattern length cap reached")
                r = oracle.occurs_infinitely(cand)
                if isinstance(r, Unknown):
                    return CheckResult(UNKNOWN, w, iterations=iterations, reason=f"occurs_infinitely: {r.reason}")
                if isinstance(r, Yes):
                    found = cand
                    break
            if found:
                break
        if found is None:
            break
        w = found
        hw = monoid_embed(A, w)
        iterations += 1
        trace.append(w)
    # fixpoint: the smallest label in h(w) is the set of states seen infinitely often
    best = min(range(A.size), key=lambda q: (bin(hw.seen[q]).count("1"), A.states[q]))
    S = hw.seen[best]
    verdict = ACCEPT if A.accepts_set(S) else REJECT
    return CheckResult(verdict, w, A.unmask(S), iterations, trace=trace)


def brute_force_up_check(alpha: UltimatelyPeriodicWord, A: MullerAutomaton, alphabet: SignAlphabet | None = None) -> bool:
    A.bind(alphabet or SignAlphabet(1))
    q = A.run(alpha.prefix)
    first_seen: dict[int, int] = {}
    passes = []
    while q not in first_seen:
        first_seen[q] = len(passes)
        visited = 0
        for ch in alpha.cycle:
            q = A.step_table(ch)[q]
            visited |= 1 << q
        passes.append(visited)
    loop = 0
    for v in passes[first_seen[q]:]:
        loop |= v
    return A.accepts_set(loop)


# ---------------------------------------------------------------------------
# prefix independence


def suffix_closure_violations(A: MullerAutomaton, samples: int = 200, rng: random.Random | None = None) -> list[str]:
    """Sample lassos; a prefix-independent automaton accepts a cycle's word from every state."""
    rng = rng or random.Random(0)
    letters = list(A.alphabet)
    A.bind(_alphabet_for(letters))
    problems = []
    chars = list(A._table)
    for _ in range(samples):
        cyc = "".join(rng.choice(chars) for _ in range(rng.randint(1, 6)))
        verdicts = set()
        for q0 in range(A.size):
            q = q0
            seen = {}
            passes = []
            while q not in seen:
                seen[q] = len(passes)
                v = 0
                for ch in cyc:
                    q = A.step_table(ch)[q]
                    v |= 1 << q
                passes.append(v)
            loop = 0
            for v in passes[seen[q]:]:
                loop |= v
            verdicts.add(A.accepts_set(loop))
        if len(verdicts) > 1:
            problems.append(cyc)
    return problems


def _transition_monoid(A: MullerAutomaton, cap: int | None = None) -> set[MonoidElement] | None:
    """Images of all nonempty words."""
    gens = [monoid_letter(A, c) for c in A._table]
    elems = set(gens)
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if cap is not None and len(elems) > cap:
                        return None
        frontier = nxt
    return elems


def _lasso_sets(x: MonoidElement) -> list[int]:
    """States seen infinitely often on x^omega, for each start state."""
    out = []
    for q0 in range(len(x.target)):
        q, seen, passes = q0, {}, []
        while q not in seen:
            seen[q] = len(passes)
            passes.append(x.seen[q])
            q = x.target[q]
        loop = 0
        for v in passes[seen[q]:]:
            loop |= v
        out.append(loop)
    return out


def is_prefix_independent(A: MullerAutomaton, limit: int = 10) -> bool:
    """Exhaustive check for small automata: for every word x, x^omega gets the
    same verdict from every start state."""
    if A.size > limit:
        raise InvalidInput(f"exhaustive check limited to {limit} states")
    A.bind(_alphabet_for(A.alphabet))
    for x in _transition_monoid(A):
        if len({A.accepts_set(m) for m in _lasso_sets(x)}) > 1:
            return False
    return True


def random_closed_automaton(rng: random.Random, max_states: int = 6, letters: Sequence[str] = ("-", "0", "+"), monoid_cap: int = 3000):
    """Random transitions; accepting sets chosen per class of infinity sets that
    must agree for prefix independence.  None if the monoid is too large."""
    letters = list(letters)
    n = rng.randint(1, max_states)
    names = [f"q{i}" for i in range(n)]
    delta = {q: {a: rng.choice(names) for a in letters} for q in names}
    reach, todo = {names[0]}, [names[0]]
    while todo:
        q = todo.pop()
        for a in letters:
            r = delta[q][a]
            if r not in reach:
                reach.add(r)
                todo.append(r)
    states = [q for q in names if q in reach]
    delta = {q: delta[q] for q in states}
    A = MullerAutomaton(states, names[0], letters, delta, [])
    A.bind(_alphabet_for(letters))
    elems = _transition_monoid(A, monoid_cap)
    if elems is None:
        return None
    parent: dict[int, int] = {}

    def find(m):
        parent.setdefault(m, m)
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    for x in elems:
        sets = _lasso_sets(x)
        for m in sets[1:]:
            parent[find(m)] = find(sets[0])
    verdict = {}
    fam = []
    for m in sorted(parent):
        root = find(m)
        if root not in verdict:
            verdict[root] = rng.random() < 0.5
        if verdict[root]:
            fam.append(A.unmask(m))
    return MullerAutomaton(states, names[0], letters, delta, fam)


def random_prefix_independent_automaton(rng: random.Random, max_states: int = 6, letters: Sequence[str] = ("-", "0", "+")) -> MullerAutomaton:
    """Random automaton whose accepting family depends only on letters seen infinitely often
    (through a last-letter class) and on a counter cycled by some letters."""
    letters = list(letters)
    r = rng.randint(1, min(3, max_states))
    cls = {a: rng.randrange(r) for a in letters}
    c = rng.randint(1, max_states // r)
    counted = {a for a in letters if rng.random() < 0.5}
    states = [(i, k) for i in range(r) for k in range(c)]

    def step(s, a):
        i, k = s
        return (cls[a], (k + 1) % c if a in counted else k)

    init = (rng.randrange(r), 0)
    reach, todo = {init}, [init]
    while todo:
        s = todo.pop()
        for a in letters:
            t = step(s, a)
            if t not in reach:
                reach.add(t)
                todo.append(t)
    order = [s for s in states if s in reach]
    rng.shuffle(order)
    name = {s: f"s{n}" for n, s in enumerate(order)}
    delta = {name[s]: {a: name[step(s, a)] for a in letters} for s in order}

    # a recurrent set S is judged by (classes in S, counters in S); the recurrent sets
    # reachable on any infinite run are enumerated through all subsets
    keep = {}
    families = []
    subsets = [frozenset(o for b, o in enumerate(order) if m >> b & 1) for m in range(1, 1 << len(order))]
    for S in subsets:
        key = (frozenset(s[0] for s in S), len({s[1] for s in S}))
        if key not in keep:
            keep[key] = rng.random() < 0.5
        if keep[key]:
            families.append(frozenset(name[s] for s in S))
    return MullerAutomaton([name[s] for s in order], name[init], letters, delta, families)


def random_up_word(rng: random.Random, max_prefix: int = 8, max_cycle: int = 8, letters: str = "-0+") -> UltimatelyPeriodicWord:
    pre = "".join(rng.choice(letters) for _ in range(rng.randint(0, max_prefix)))
    cyc = "".join(rng.choice(letters) for _ in range(rng.randint(1, max_cycle)))
    return UltimatelyPeriodicWord(pre, cyc)
