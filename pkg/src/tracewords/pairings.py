"""Admissible pairings of the edges of word-faces.

Each word ``w_j`` is a polygonal face with ``|w_j|`` edges.  Slot ``l`` of a
face is the corner between edges ``l-1`` and ``l``; the letter at position
``l`` contributes the matrix entry ``M[x, y]`` with ``(x, y)`` the slots
``(l, l+1)``, swapped when the letter is transposed.

Two letters may be paired when they have nonzero covariance.  Writing the
entry coordinates of the two letters as ``(x1, y1)`` and ``(x2, y2)``, a
pair merges slots as follows:

=====================  ==========================  =====================
letters                condition                   merges
=====================  ==========================  =====================
``G_r`` / ``G_r``      conjugation flags differ    x1~x2, y1~y2
``R_r`` / ``R_r``      always                      x1~x2, y1~y2
``H_r`` / ``H_r``      equal conjugation flags     x1~y2, y1~x2
``H_r`` / ``H_r``      conjugation flags differ    x1~x2, y1~y2
``S_r`` / ``S_r``      twist = False               x1~y2, y1~x2
``S_r`` / ``S_r``      twist = True                x1~x2, y1~y2
=====================  ==========================  =====================

These are the second moments ``E[G_ab conj(G_cd)] = d_ac d_bd / N``,
``E[R_ab R_cd] = d_ac d_bd / N``, ``E[H_ab H_cd] = d_ad d_bc / N`` and
``E[S_ab S_cd] = (d_ac d_bd + d_ad d_bc) / N``.  A GOE pair therefore comes
in two decorated versions, one per delta term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .errors import InvalidPairingError, ResourceLimitError
from .words import Ensemble, Letter, Word, as_word, is_balanced

DEFAULT_MAX_LENGTH = 24


class EdgeId(NamedTuple):
    face: int  # 0-based index into the word list
    position: int  # 1-based position within the face


SlotId = EdgeId


class Glue(NamedTuple):
    """One covariance term for a pair of edges."""

    twist: bool | None
    merges: tuple[tuple[int, int], tuple[int, int]]  # global slot ids
    parity: int  # 0 when the faces glue with matching orientations


@dataclass(frozen=True)
class DecoratedPairing:
    """A perfect matching on the edges plus a twist bit per GOE pair.

    ``pairs`` is sorted by its first edge; ``twists[i]`` is ``None`` unless
    pair ``i`` joins two GOE letters.
    """

    pairs: tuple[tuple[EdgeId, EdgeId], ...]
    twists: tuple[bool | None, ...]

    def to_json_obj(self) -> dict:
        return {
            "pairs": [[list(a), list(b)] for a, b in self.pairs],
            "twists": list(self.twists),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DecoratedPairing":
        pairs = tuple(
            (EdgeId(*a), EdgeId(*b)) for a, b in obj["pairs"]
        )
        twists = tuple(obj.get("twists") or [None] * len(pairs))
        return cls(pairs, twists)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def loads(cls, text: str) -> "DecoratedPairing":
        return cls.from_json_obj(json.loads(text))


def _covariance_rule(a: Letter, b: Letter) -> list[tuple[bool | None, bool]]:
    """List of ``(twist, direct)`` terms; ``direct`` means x1~x2, y1~y2."""
    if a.type != b.type:
        return []
    ens = a.ensemble
    if ens is Ensemble.GINIBRE_COMPLEX:
        return [(None, True)] if a.conjugated != b.conjugated else []
    if ens is Ensemble.GINIBRE_REAL:
        return [(None, True)]
    if ens is Ensemble.GUE:
        return [(None, a.conjugated != b.conjugated)]
    return [(False, False), (True, True)]


class Layout:
    """Flattened edges and slots of a list of word-faces.

    Edge ``e`` and slot ``e`` share a global index: slot ``e`` is the corner
    at the start of edge ``e`` in its face.
    """

    def __init__(self, words: Sequence):
        self.words: tuple[Word, ...] = tuple(as_word(w) for w in words)
        if not self.words:
            raise ValueError("need at least one word")
        self.lengths = [len(w) for w in self.words]
        self.offsets = []
        acc = 0
        for n in self.lengths:
            self.offsets.append(acc)
            acc += n
        self.m = acc
        self.k = len(self.words)
        self.letters: list[Letter] = []
        self.face_of: list[int] = []
        self.pos_of: list[int] = []
        self.src: list[int] = []
        self.dst: list[int] = []
        for f, w in enumerate(self.words):
            off, n = self.offsets[f], self.lengths[f]
            for p, letter in enumerate(w):
                self.letters.append(letter)
                self.face_of.append(f)
                self.pos_of.append(p)
                self.src.append(off + p)
                self.dst.append(off + (p + 1) % n)
        self.options: dict[tuple[int, int], tuple[Glue, ...]] = {}
        self.partners: list[list[int]] = [[] for _ in range(self.m)]
        buckets: dict = {}
        for e, letter in enumerate(self.letters):
            buckets.setdefault(letter.type, []).append(e)
        for edges in buckets.values():
            for i, e in enumerate(edges):
                for f in edges[i + 1:]:
                    opts = self._glues(e, f)
                    if opts:
                        self.options[(e, f)] = opts
                        self.partners[e].append(f)
                        self.partners[f].append(e)
        self.balanced = is_balanced(self.letters)

    def entry(self, e: int) -> tuple[int, int]:
        if self.letters[e].transposed:
            return self.dst[e], self.src[e]
        return self.src[e], self.dst[e]

    def _glues(self, e: int, f: int) -> tuple[Glue, ...]:
        a, b = self.letters[e], self.letters[f]
        x1, y1 = self.entry(e)
        x2, y2 = self.entry(f)
        out = []
        for twist, direct in _covariance_rule(a, b):
            if direct:
                merges = ((x1, x2), (y1, y2))
            else:
                merges = ((x1, y2), (y1, x2))
            parity = int(direct) ^ int(a.transposed != b.transposed)
            out.append(Glue(twist, merges, parity))
        return tuple(out)

    def edge_id(self, e: int) -> EdgeId:
        return EdgeId(self.face_of[e], self.pos_of[e] + 1)

    def global_edge(self, eid: EdgeId) -> int:
        face, pos = eid
        if not (0 <= face < self.k) or not (1 <= pos <= self.lengths[face]):
            raise InvalidPairingError(f"edge {tuple(eid)} does not exist")
        return self.offsets[face] + pos - 1

    def to_pairing(self, chosen: Sequence[tuple[int, int, Glue]]) -> DecoratedPairing:
        chosen = sorted(chosen, key=lambda t: t[0])
        return DecoratedPairing(
            tuple((self.edge_id(e), self.edge_id(f)) for e, f, _ in chosen),
            tuple(g.twist for _, _, g in chosen),
        )

    def resolve(self, phi: DecoratedPairing) -> list[tuple[int, int, Glue]]:
        """Map a pairing back to global edges and covariance terms.

        Raises :class:`InvalidPairingError` if ``phi`` is not an admissible
        decorated pairing of these words.
        """
        if len(phi.twists) != len(phi.pairs):
            raise InvalidPairingError("twists and pairs differ in length")
        seen = [False] * self.m
        out = []
        for (a, b), twist in zip(phi.pairs, phi.twists):
            e, f = self.global_edge(a), self.global_edge(b)
            if e == f or seen[e] or seen[f]:
                raise InvalidPairingError(f"edge used twice in pair {a}-{b}")
            seen[e] = seen[f] = True
            if e > f:
                e, f = f, e
            opts = self.options.get((e, f), ())
            match = [g for g in opts if g.twist == twist]
            if not match:
                raise InvalidPairingError(
                    f"pair {tuple(a)}-{tuple(b)} with twist={twist} is not admissible"
                )
            out.append((e, f, match[0]))
        if not all(seen):
            raise InvalidPairingError("pairing does not cover every edge")
        return out

    def check_size(self, max_length: int | None):
        if max_length is not None and self.m > max_length:
            raise ResourceLimitError(
                f"total word length {self.m} exceeds the enumeration cap {max_length}"
            )


def partition_roots(words: Sequence, max_length: int | None = DEFAULT_MAX_LENGTH) -> list[tuple[int, bool | None]]:
    """Choices for the first edge's partner, used to split an enumeration.

    Each entry ``(f, twist)`` can be passed as ``root`` to
    :func:`enumerate_pairings`; the sub-streams are disjoint and together
    give the full stream.
    """
    layout = words if isinstance(words, Layout) else Layout(words)
    layout.check_size(max_length)
    if not layout.balanced:
        return []
    return [(f, g.twist) for f in layout.partners[0] for g in layout.options[(0, f)]]


def iter_raw(layout: Layout, root: tuple[int, bool | None] | None = None) -> Iterator[list[tuple[int, int, Glue]]]:
    """Backtracking over the lowest unpaired edge.

    Yields the list of ``(e, f, glue)`` triples (``e < f``).  The list object
    is reused between yields; copy it if you keep it.
    """
    m = layout.m
    if m % 2 or not layout.balanced:
        return
    paired = [False] * m
    chosen: list[tuple[int, int, Glue]] = []
    partners, options = layout.partners, layout.options

    def rec(e):
        while e < m and paired[e]:
            e += 1
        if e == m:
            yield chosen
            return
        paired[e] = True
        for f in partners[e]:
            if paired[f]:
                continue
            paired[f] = True
            for g in options[(e, f)]:
                chosen.append((e, f, g))
                yield from rec(e + 1)
                chosen.pop()
            paired[f] = False
        paired[e] = False

    if root is None:
        yield from rec(0)
        return
    f, twist = root
    opts = [g for g in options.get((0, f), ()) if g.twist == twist]
    if not opts:
        return
    paired[0] = paired[f] = True
    chosen.append((0, f, opts[0]))
    yield from rec(1)


def enumerate_pairings(
    words: Sequence,
    root: tuple[int, bool | None] | None = None,
    max_length: int | None = DEFAULT_MAX_LENGTH,
) -> Iterator[DecoratedPairing]:
    """Every admissible decorated pairing of ``words``, each exactly once.

    The order is deterministic.  GOE pairs appear once per twist value.
    Raises :class:`ResourceLimitError` when the total length exceeds
    ``max_length``.
    """
    layout = Layout(words)
    layout.check_size(max_length)
    for chosen in iter_raw(layout, root):
        yield layout.to_pairing(chosen)
