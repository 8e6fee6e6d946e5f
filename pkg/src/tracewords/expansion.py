"""Exact expectations of products of traces as Laurent polynomials in N.

``E[prod_j Tr w_j]`` is the sum over admissible decorated pairings of
``N^(V - m/2)``, with ``V`` the number of slot classes after gluing and
``m`` the total word length.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .errors import ConsistencyError, NoPairingError, UnsupportedConfigurationError
from .laurent import LaurentPolynomial
from .pairings import (
    DEFAULT_MAX_LENGTH,
    DecoratedPairing,
    Layout,
    iter_raw,
    partition_roots,
)
from .topology import DEFAULT_SEARCH_MAX_LENGTH, count_matching, glue_raw
from .words import Ensemble, Word, as_word, star


@dataclass(frozen=True)
class SphericalCounts:
    """Sphere counts over P(w), P(w, w*), P(w, w) and the projective-plane count over P(w)."""

    a: int
    p: int
    b: int
    c: int

    def as_dict(self) -> dict[str, int]:
        return {"a": self.a, "p": self.p, "b": self.b, "c": self.c}


def _words(words) -> list[Word]:
    if isinstance(words, (Word, str)):
        words = [words]
    out = [as_word(w) for w in words]
    if not out:
        raise ValueError("need at least one word")
    return out


def _exponent_counts(words, root) -> Counter:
    layout = Layout(words)
    counts: Counter = Counter()
    for chosen in iter_raw(layout, root):
        counts[glue_raw(layout, chosen).exponent] += 1
    return counts


def genus_expansion(
    words,
    workers: int | None = None,
    max_length: int | None = DEFAULT_MAX_LENGTH,
) -> LaurentPolynomial:
    """``E[prod Tr w_j]`` as an exact Laurent polynomial in ``N``.

    Every pairing is glued and its exponent is computed twice, as
    ``V - m/2`` and as ``2c - k - 2g_o - g_no``; a mismatch raises
    :class:`ConsistencyError`.  With ``workers > 1`` the enumeration is split
    by the first edge's partner across processes; the result does not
    depend on the split.

    >>> str(genus_expansion(["S1 S1"]))
    'N + 1'
    """
    words = _words(words)
    layout = Layout(words)
    layout.check_size(max_length)
    if not workers or workers <= 1:
        counts = _exponent_counts(words, None)
    else:
        roots = partition_roots(layout, max_length)
        counts = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_exponent_counts, [words] * len(roots), roots):
                counts.update(part)
    return LaurentPolynomial(dict(counts))


def _has_parity_one(layout: Layout) -> bool:
    return any(g.parity for opts in layout.options.values() for g in opts)


def sphere_count(words, max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH) -> int:
    """Number of pairings that glue all faces of ``words`` into one sphere."""
    words = _words(words)
    layout = Layout(words)
    return count_matching(layout, 0, layout.k, lambda s: s.is_sphere, max_length)


def projective_plane_count(w, max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH) -> int:
    """Number of pairings of one face that give a projective plane."""
    layout = Layout([as_word(w)])
    if not _has_parity_one(layout):
        return 0
    return count_matching(
        layout, 1, 1, lambda s: s.components[0].is_projective_plane, max_length
    )


def spherical_counts(w, max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH) -> SphericalCounts:
    """Counts ``(a, p, b, c)`` for a single word.

    Uses the pruned search of :mod:`tracewords.topology`; every pairing it
    returns is glued again and checked.  GOE pairs count once per twist.
    """
    w = as_word(w)
    return SphericalCounts(
        sphere_count([w], max_length),
        projective_plane_count(w, max_length),
        sphere_count([w, star(w)], max_length),
        sphere_count([w, w], max_length),
    )


def _is_atom(comp) -> bool:
    return comp.F == 1 and (comp.is_sphere or comp.is_projective_plane)


def _inclusion_exclusion(words: list[Word], max_length) -> LaurentPolynomial:
    k = len(words)
    shifts = []
    for w in words:
        shifts.append(LaurentPolynomial({1: sphere_count([w]), 0: projective_plane_count(w)}))
    total = LaurentPolynomial()
    for size in range(k + 1):
        for subset in itertools.combinations(range(k), size):
            term = LaurentPolynomial.constant(-1 if (k - size) % 2 else 1)
            for i in range(k):
                if i not in subset:
                    term = term * shifts[i]
            if subset:
                term = term * genus_expansion([words[i] for i in subset], max_length=max_length)
            total = total + term
    return total


def atom_free_expansion(
    words,
    check: bool = True,
    max_length: int | None = DEFAULT_MAX_LENGTH,
) -> LaurentPolynomial:
    """Sum of ``N^(V - m/2)`` over pairings with no atom.

    An atom is a component made of one face that is a sphere or a
    projective plane.  The result is ``E[prod (Tr w_j - a_j N - p_j)]``.
    With ``check`` the same polynomial is rebuilt by inclusion-exclusion
    over subsets of faces and compared.
    """
    words = _words(words)
    layout = Layout(words)
    layout.check_size(max_length)
    counts: Counter = Counter()
    for chosen in iter_raw(layout):
        surface = glue_raw(layout, chosen)
        if not any(_is_atom(c) for c in surface.components):
            counts[surface.exponent] += 1
    direct = LaurentPolynomial(dict(counts))
    if check:
        other = _inclusion_exclusion(words, max_length)
        if other != direct:
            raise ConsistencyError(
                f"atom-free expansion {direct} differs from inclusion-exclusion {other}"
            )
    return direct


def bi_atomic_count(
    words,
    check: bool | None = None,
    max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH,
) -> int:
    """Number of pairings whose surface is ``k/2`` spheres of two faces each.

    ``check`` compares with the constant term of :func:`atom_free_expansion`;
    by default this runs when the total length allows full enumeration.
    """
    words = _words(words)
    layout = Layout(words)
    if layout.k % 2:
        return 0
    count = count_matching(layout, 0, 2, lambda s: s.is_bi_atomic, max_length)
    if check is None:
        check = layout.m <= DEFAULT_MAX_LENGTH
    if check:
        const = atom_free_expansion(words, check=False).coefficient(0)
        if const != count:
            raise ConsistencyError(
                f"bi-atomic count {count} differs from atom-free constant term {const}"
            )
    return count


def nondegenerate_count(words, max_length: int | None = DEFAULT_MAX_LENGTH) -> tuple[int, int]:
    """``(count, Vmax)``: how many pairings reach the largest vertex count."""
    words = _words(words)
    layout = Layout(words)
    layout.check_size(max_length)
    best, count = None, 0
    for chosen in iter_raw(layout):
        v = glue_raw(layout, chosen).V
        if best is None or v > best:
            best, count = v, 1
        elif v == best:
            count += 1
    if best is None:
        raise NoPairingError("no admissible pairing")
    return count, best


# ---------------------------------------------------------------------------
# combinatorial sphere test for one or two complex Ginibre faces


def _crosses(p: tuple[int, int], q: tuple[int, int]) -> bool:
    a, b = p
    c, d = q
    return a < c < b < d or c < a < d < b


def spherical_rule_check(words, phi: DecoratedPairing) -> bool:
    """Whether ``phi`` glues one or two faces into a sphere, decided by rules.

    The rules: no two pairs inside a face cross; with two faces, at least
    one pair joins them, no pair inside a face has joining edges on both
    of its sides (a bridge), and the joining edges meet the second face in
    the reverse cyclic order of the first.
    """
    words = _words(words)
    if len(words) > 2:
        raise UnsupportedConfigurationError("the rule check handles one or two faces")
    for w in words:
        for letter in w:
            if letter.ensemble is not Ensemble.GINIBRE_COMPLEX or letter.transposed != letter.conjugated:
                raise UnsupportedConfigurationError(
                    "the rule check needs letters G_i and G_i* only"
                )
    layout = Layout(words)
    chosen = layout.resolve(phi)
    internal: list[list[tuple[int, int]]] = [[] for _ in words]
    external: list[tuple[int, int]] = []
    for e, f, _ in chosen:
        fe, ff = layout.face_of[e], layout.face_of[f]
        pe, pf = layout.pos_of[e], layout.pos_of[f]
        if fe == ff:
            internal[fe].append((min(pe, pf), max(pe, pf)))
        else:
            external.append((pe, pf) if fe == 0 else (pf, pe))
    for chords in internal:
        for p, q in itertools.combinations(chords, 2):
            if _crosses(p, q):
                return False
    if len(words) == 1:
        return True
    if not external:
        return False
    ext_pos = [{a for a, _ in external}, {b for _, b in external}]
    for face, chords in enumerate(internal):
        for lo, hi in chords:
            inside = any(lo < x < hi for x in ext_pos[face])
            outside = any(x < lo or x > hi for x in ext_pos[face])
            if inside and outside:
                return False
    partners = [b for _, b in sorted(external)]
    ascents = sum(
        1 for i in range(len(partners)) if partners[(i + 1) % len(partners)] > partners[i]
    )
    return ascents <= 1
