"""Letters and words over the four Gaussian ensembles.

A letter is one of ``G`` (complex Ginibre), ``R`` (real Ginibre), ``H`` (GUE)
or ``S`` (GOE) with a positive index and two flags, ``transposed`` and
``conjugated``.  The conjugate transpose ``*`` is stored as both flags set.
Redundant forms are normalized when a letter is built, so ``H1t`` becomes
``H1~``, ``H1*`` becomes ``H1``, ``S1t`` becomes ``S1`` and ``R1~`` becomes
``R1``.

Text grammar (whitespace is ignored between tokens)::

    word     := term+
    term     := atom ("^" integer)?
    atom     := letter | "(" word ")"
    letter   := ("G" | "R" | "H" | "S") integer modifier*
    modifier := "*" | "t" | "~"
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptyWordError, WordSyntaxError

__all__ = [
    "Ensemble",
    "Letter",
    "Word",
    "parse_word",
    "render",
    "star",
    "coperiod",
    "cyclic_canonical",
    "trace_distinct",
    "is_star_free",
    "is_balanced",
    "is_star_stable",
]


class Ensemble(enum.Enum):
    GINIBRE_COMPLEX = "G"
    GINIBRE_REAL = "R"
    GUE = "H"
    GOE = "S"

    @property
    def symbol(self) -> str:
        return self.value


_ENSEMBLE_ORDER = {e: i for i, e in enumerate(Ensemble)}


@dataclass(frozen=True)
class Letter:
    ensemble: Ensemble
    index: int
    transposed: bool = False
    conjugated: bool = False

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"letter index must be a positive integer, got {self.index!r}")
        t, c = bool(self.transposed), bool(self.conjugated)
        if self.ensemble is Ensemble.GUE:
            # H^t is the entrywise conjugate of H
            if t:
                t, c = False, not c
        elif self.ensemble is Ensemble.GINIBRE_REAL:
            c = False
        elif self.ensemble is Ensemble.GOE:
            t, c = False, False
        object.__setattr__(self, "transposed", t)
        object.__setattr__(self, "conjugated", c)

    @property
    def key(self) -> tuple:
        """Total order used for canonical rotations."""
        return (_ENSEMBLE_ORDER[self.ensemble], self.index, self.transposed, self.conjugated)

    @property
    def type(self) -> tuple[Ensemble, int]:
        return (self.ensemble, self.index)

    def adjoint(self) -> "Letter":
        return Letter(self.ensemble, self.index, not self.transposed, not self.conjugated)

    def __str__(self) -> str:
        mod = ""
        if self.transposed and self.conjugated:
            mod = "*"
        elif self.transposed:
            mod = "t"
        elif self.conjugated:
            mod = "~"
        return f"{self.ensemble.symbol}{self.index}{mod}"


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if not self.letters:
            raise EmptyWordError("a word needs at least one letter")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        return Word(self.letters * k)

    def __str__(self) -> str:
        return render(self)

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    @property
    def star(self) -> "Word":
        return star(self)


def render(w: Word) -> str:
    """Print ``w`` in the grammar accepted by :func:`parse_word`."""
    return " ".join(str(letter) for letter in w)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, expected):
        raise WordSyntaxError(self.text, self.pos, expected)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("integer")
        return int(self.text[start:self.pos])

    def word(self, closing: str = "") -> list[Letter]:
        letters: list[Letter] = []
        n_terms = 0
        while True:
            c = self.peek()
            if c == "" or c == closing:
                break
            letters.extend(self.term())
            n_terms += 1
        if n_terms == 0:
            self.fail("letter or '('")
        return letters

    def term(self) -> list[Letter]:
        letters = self.atom()
        if self.peek() == "^":
            self.pos += 1
            letters = letters * self.integer()
        return letters

    def atom(self) -> list[Letter]:
        c = self.peek()
        if c == "(":
            self.pos += 1
            inner = self.word(closing=")")
            if self.peek() != ")":
                self.fail("')'")
            self.pos += 1
            return inner
        if c in ("G", "R", "H", "S"):
            return [self.letter()]
        self.fail("letter or '('")

    def letter(self) -> Letter:
        ensemble = Ensemble(self.text[self.pos])
        self.pos += 1
        if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
            self.fail("integer")
        start = self.pos
        index = self.integer()
        if index < 1:
            self.pos = start
            self.fail("positive integer")
        t = c = False
        while self.pos < len(self.text) and self.text[self.pos] in "*t~":
            m = self.text[self.pos]
            if m == "*":
                t, c = not t, not c
            elif m == "t":
                t = not t
            else:
                c = not c
            self.pos += 1
        return Letter(ensemble, index, t, c)


def parse_word(text: str) -> Word:
    """Parse ``text`` into a normalized :class:`Word`.

    Raises :class:`WordSyntaxError` on malformed input and
    :class:`EmptyWordError` when the expansion has no letters.

    >>> str(parse_word("(G1 G2*)^2 H3t"))
    'G1 G2* G1 G2* H3~'
    """
    p = _Parser(text)
    letters = p.word()
    if p.peek() != "":
        p.fail("end of input")
    if not letters:
        raise EmptyWordError(f"{text!r} expands to the empty word")
    return Word(tuple(letters))


def as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w)
    return Word(tuple(w))


# ---------------------------------------------------------------------------
# string combinatorics


def star(w: Word) -> Word:
    """Reverse ``w`` and take the conjugate transpose of every letter."""
    return Word(tuple(letter.adjoint() for letter in reversed(w.letters)))


def _failure_function(keys: list) -> list[int]:
    fail = [0] * (len(keys) + 1)
    fail[0] = -1
    k = -1
    for i, x in enumerate(keys):
        while k >= 0 and keys[k] != x:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    return fail


def coperiod(w: Word) -> int:
    """Largest ``k`` such that ``w`` is the ``k``-th power of a word."""
    keys = [letter.key for letter in w]
    n = len(keys)
    period = n - _failure_function(keys)[n]
    return n // period if n % period == 0 else 1


def _least_rotation(keys: list) -> int:
    # Booth's algorithm
    s = keys + keys
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % len(keys)


def cyclic_canonical(w: Word) -> Word:
    """Lexicographically least rotation of ``w`` (letters ordered by :attr:`Letter.key`)."""
    k = _least_rotation([letter.key for letter in w])
    return Word(w.letters[k:] + w.letters[:k])


def trace_distinct(w1: Word, w2: Word) -> bool:
    """True unless ``w1`` and ``w2`` agree up to a cyclic rotation."""
    return cyclic_canonical(w1) != cyclic_canonical(w2)


def is_star_free(w: Word) -> bool:
    return all(
        letter.ensemble is Ensemble.GINIBRE_COMPLEX
        and not letter.transposed
        and not letter.conjugated
        for letter in w
    )


def _type_counts(letters: Iterable[Letter]) -> dict:
    counts: dict = {}
    for letter in letters:
        if letter.ensemble is Ensemble.GINIBRE_COMPLEX:
            key = (letter.type, letter.conjugated)
        else:
            key = (letter.type, None)
        counts[key] = counts.get(key, 0) + 1
    return counts


def is_balanced(w) -> bool:
    """Whether every letter type can be matched with a partner.

    Complex Ginibre letters need as many conjugated as non-conjugated
    occurrences per index; other ensembles need an even count per index.
    Accepts a word or any iterable of letters.
    """
    counts = _type_counts(w)
    for (typ, conj), n in counts.items():
        if conj is None:
            if n % 2:
                return False
        elif conj is False and counts.get((typ, True), 0) != n:
            return False
        elif conj is True and counts.get((typ, False), 0) != n:
            return False
    return True


def is_star_stable(w: Word) -> bool:
    return cyclic_canonical(w) == cyclic_canonical(star(w))
