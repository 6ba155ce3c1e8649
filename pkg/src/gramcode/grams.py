"""Words, l-grams, weight-restricted gram sets, profiles and distances.

A word is a q-ary sequence; its l-gram profile counts how often each
length-l substring occurs, with grams indexed lexicographically.  Gram
sets may be the full cube [q]^l, a weight-restricted subset (the
GC-content style constraint) or an explicit list.  All values here are
immutable and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

DNA_LETTERS = "ATGC"
MAX_DIGIT_ALPHABET = 9


class OutOfSetGramError(ValueError):
    """A word contains an l-gram outside the gram set in force."""

    def __init__(self, gram, position):
        self.gram = tuple(gram)
        self.position = position
        super().__init__(
            f"gram {''.join(map(str, gram))} at position {position} is not in the gram set"
        )


@dataclass(frozen=True)
class Word:
    """A q-ary word: symbols in [0, q-1], length >= 1."""

    symbols: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if self.q < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.q}")
        if len(self.symbols) < 1:
            raise ValueError("empty word")
        for s in self.symbols:
            if not 0 <= s < self.q:
                raise ValueError(f"symbol {s} out of range for q={self.q}")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def grams(self, ell: int):
        """All length-ell windows of the word, in position order."""
        s = self.symbols
        return [s[i : i + ell] for i in range(len(s) - ell + 1)]


def word(text: str, q: int) -> Word:
    """Parse a digit string into a Word over [q].  q is capped at 9."""
    if q > MAX_DIGIT_ALPHABET:
        raise ValueError(f"digit rendering supports q <= {MAX_DIGIT_ALPHABET}")
    if not text:
        raise ValueError("empty word text")
    if not text.isdigit():
        raise ValueError(f"invalid word text {text!r}")
    return Word(tuple(int(c) for c in text), q)


def word_text(x: Word) -> str:
    """Render a word as a digit string (q <= 9)."""
    if x.q > MAX_DIGIT_ALPHABET:
        raise ValueError(f"digit rendering supports q <= {MAX_DIGIT_ALPHABET}")
    return "".join(str(s) for s in x.symbols)


def dna_string(x: Word) -> str:
    """Render a quaternary word as DNA text, 0123 -> ATGC."""
    if x.q != 4:
        raise ValueError("DNA rendering requires q = 4")
    return "".join(DNA_LETTERS[s] for s in x.symbols)


def parse_dna(text: str) -> Word:
    """Parse DNA text (ATGC) into a quaternary word."""
    if not text:
        raise ValueError("empty DNA text")
    try:
        symbols = tuple(DNA_LETTERS.index(c) for c in text.upper())
    except ValueError:
        raise ValueError(f"invalid DNA text {text!r}") from None
    return Word(symbols, 4)


def lex_index(gram, q: int, ell: int) -> int:
    """0-based rank of a gram among all of [q]^ell in lexicographic order.

    Equals the base-q value of the gram; inverse of :func:`gram_at`.
    """
    gram = tuple(gram)
    if len(gram) != ell:
        raise ValueError(f"gram length {len(gram)} != ell={ell}")
    value = 0
    for s in gram:
        if not 0 <= s < q:
            raise ValueError(f"symbol {s} out of range for q={q}")
        value = value * q + s
    return value


def gram_at(index: int, q: int, ell: int) -> tuple[int, ...]:
    """The gram of rank `index` in lexicographic order over [q]^ell."""
    if not 0 <= index < q**ell:
        raise ValueError(f"index {index} out of range for q={q}, ell={ell}")
    out = []
    for _ in range(ell):
        index, r = divmod(index, q)
        out.append(r)
    return tuple(reversed(out))


def q_weight(symbols, q: int, q_star: int) -> int:
    """Number of symbols lying in the top band [q - q_star, q - 1]."""
    if not 1 <= q_star <= q - 1:
        raise ValueError(f"q_star must be in [1, q-1], got {q_star}")
    low = q - q_star
    return sum(1 for s in symbols if s >= low)


@dataclass(frozen=True)
class GramSet:
    """An ordered subset of [q]^ell with positional (lexicographic) indexing."""

    q: int
    ell: int
    grams: tuple[tuple[int, ...], ...]
    _index: dict = field(repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("gram length must be >= 2")
        if not self.grams:
            raise ValueError("empty gram set")
        prev = None
        for g in self.grams:
            if len(g) != self.ell:
                raise ValueError(f"gram {g} has length != {self.ell}")
            for s in g:
                if not 0 <= s < self.q:
                    raise ValueError(f"symbol {s} out of range for q={self.q}")
            if prev is not None and g <= prev:
                raise ValueError("grams must be strictly sorted")
            prev = g
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.grams)})

    def __len__(self):
        return len(self.grams)

    def __contains__(self, gram):
        return tuple(gram) in self._index

    def index_of(self, gram) -> int:
        return self._index[tuple(gram)]

    def is_full(self) -> bool:
        return len(self.grams) == self.q**self.ell

    def label(self, i: int) -> str:
        return "".join(map(str, self.grams[i]))


def full_gram_set(q: int, ell: int) -> GramSet:
    """The unrestricted gram set [q]^ell."""
    return GramSet(q, ell, tuple(product(range(q), repeat=ell)))


def build_weight_set(q: int, ell: int, q_star: int, w1: int, w2: int) -> GramSet:
    """All ell-grams whose q_star-weight lies in [w1, w2], sorted."""
    if not 0 <= w1 <= w2 <= ell:
        raise ValueError(f"need 0 <= w1 <= w2 <= ell, got [{w1}, {w2}]")
    grams = tuple(
        g for g in product(range(q), repeat=ell) if w1 <= q_weight(g, q, q_star) <= w2
    )
    if not grams:
        raise ValueError("weight constraints admit no grams")
    return GramSet(q, ell, grams)


def explicit_gram_set(q: int, ell: int, grams) -> GramSet:
    """Gram set from an explicit collection; sorts and rejects duplicates."""
    tup = sorted(tuple(g) for g in grams)
    for a, b in zip(tup, tup[1:]):
        if a == b:
            raise ValueError(f"duplicate gram {a}")
    return GramSet(q, ell, tuple(tup))


@dataclass(frozen=True)
class ProfileVector:
    """Occurrence counts, positionally aligned with a GramSet."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        for c in self.counts:
            if c < 0:
                raise ValueError(f"negative count {c}")

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    @property
    def total(self) -> int:
        return sum(self.counts)


def profile(x: Word, s: GramSet) -> ProfileVector:
    """Profile of x over s.  Strict: any out-of-set gram is an error.

    The count vector sums to len(x) - ell + 1.
    """
    counts = [0] * len(s)
    ell = s.ell
    if len(x) < ell:
        raise ValueError(f"word of length {len(x)} has no {ell}-grams")
    for pos, g in enumerate(x.grams(ell)):
        idx = s._index.get(g)
        if idx is None:
            raise OutOfSetGramError(g, pos)
        counts[idx] += 1
    return ProfileVector(tuple(counts))


def profile_lenient(x: Word, s: GramSet):
    """Profile counting only in-set grams; returns (profile, foreign_count)."""
    counts = [0] * len(s)
    foreign = 0
    for g in x.grams(s.ell):
        idx = s._index.get(g)
        if idx is None:
            foreign += 1
        else:
            counts[idx] += 1
    return ProfileVector(tuple(counts)), foreign


def asym_delta(u, v) -> int:
    """One-sided positive difference sum max(u_i - v_i, 0)."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise ValueError(f"length mismatch {len(u)} != {len(v)}")
    return sum(a - b for a, b in zip(u, v) if a > b)


def asym_distance(u, v) -> int:
    """Asymmetric distance: max of the two one-sided difference sums.

    A metric on count vectors; for equal-sum vectors it equals half
    the L1 distance.
    """
    return max(asym_delta(u, v), asym_delta(v, u))


def gram_distance(x: Word, y: Word, s: GramSet) -> int:
    """Asymmetric distance between the profiles of two words over s.

    A pseudometric on words: distinct words may share a profile.
    """
    return asym_distance(profile(x, s).counts, profile(y, s).counts)


@dataclass(frozen=True)
class ChannelBudget:
    """Error budget: synthesis substitutions, coverage losses, gram substitutions."""

    s_syn: int = 0
    t: int = 0
    s_seq: int = 0

    def __post_init__(self):
        if min(self.s_syn, self.t, self.s_seq) < 0:
            raise ValueError("channel budgets must be nonnegative")


# --- gram-set / profile text formats -------------------------------------
#
# Profile file: a header line "q ell <set-spec> n" followed by one line of
# space-separated counts.  <set-spec> is "full", "weight q* w1 w2", or
# "explicit g1 g2 ..." (digit strings).

def gram_set_spec(s: GramSet, q_star: int | None = None, w1: int | None = None,
                  w2: int | None = None) -> str:
    if s.is_full():
        return "full"
    if q_star is not None:
        return f"weight {q_star} {w1} {w2}"
    return "explicit " + " ".join(s.label(i) for i in range(len(s)))


def parse_gram_set_spec(q: int, ell: int, tokens: list[str]) -> GramSet:
    """Build a gram set from header tokens (see module format notes)."""
    if not tokens:
        raise ValueError("missing gram set spec")
    kind = tokens[0]
    if kind == "full":
        return full_gram_set(q, ell)
    if kind == "weight":
        if len(tokens) != 4:
            raise ValueError("weight spec needs: weight q* w1 w2")
        q_star, w1, w2 = (int(t) for t in tokens[1:])
        return build_weight_set(q, ell, q_star, w1, w2)
    if kind == "explicit":
        grams = [tuple(int(c) for c in tok) for tok in tokens[1:]]
        return explicit_gram_set(q, ell, grams)
    raise ValueError(f"unknown gram set spec {kind!r}")


def format_profile_file(counts, s: GramSet, n: int, spec: str | None = None) -> str:
    spec = spec or gram_set_spec(s)
    header = f"{s.q} {s.ell} {spec} {n}"
    return header + "\n" + " ".join(str(c) for c in counts) + "\n"


def parse_profile_file(text: str):
    """Parse a profile file; returns (gram_set, n, counts)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError("profile file needs a header line and a counts line")
    head = lines[0].split()
    q, ell = int(head[0]), int(head[1])
    n = int(head[-1])
    s = parse_gram_set_spec(q, ell, head[2:-1])
    counts = tuple(int(t) for t in lines[1].split())
    if len(counts) != len(s):
        raise ValueError(f"expected {len(s)} counts, got {len(counts)}")
    return s, n, counts
