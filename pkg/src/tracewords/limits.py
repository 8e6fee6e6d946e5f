"""Large-N limits: Fuss-Catalan moments, CLT parameters, mixed moments.

Every value here is an exact integer or rational.  Where a closed form is
known, the function also computes the same number by enumeration and
raises :class:`ConsistencyError` if the two disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import ConsistencyError, NotStarFreeError
from .expansion import sphere_count, spherical_counts
from .words import Ensemble, Letter, Word, as_word, coperiod, is_star_free, star


def fuss_catalan(s: int, n: int) -> int:
    """``FC_s(n) = binom(s n + 1, n) / (s n + 1)``.

    >>> [fuss_catalan(2, n) for n in range(6)]
    [1, 1, 2, 5, 14, 42]
    """
    if s < 2 or n < 0:
        raise ValueError("need s >= 2 and n >= 0")
    return comb(s * n + 1, n) // (s * n + 1)


def _require_star_free(w: Word) -> None:
    if not is_star_free(w):
        raise NotStarFreeError(f"{w} is not star-free")


def fc_moment_of_word(w, k: int) -> int:
    """Limit of ``(1/N) E Tr((w w*)^k)`` for a star-free word ``w``.

    Counted as the spherical pairings of the single face ``(w w*)^k`` and
    checked against ``FC_{|w|+1}(k)``.
    """
    w = as_word(w)
    _require_star_free(w)
    if k < 1:
        raise ValueError("k must be positive")
    count = sphere_count([(w * star(w)) ** k])
    expected = fuss_catalan(len(w) + 1, k)
    if count != expected:
        raise ConsistencyError(f"sphere count {count} != FC_{len(w) + 1}({k}) = {expected}")
    return count


@dataclass(frozen=True)
class CltParams:
    shift: int
    b: int
    c: int
    var_re: Fraction
    var_im: Fraction

    def as_dict(self) -> dict[str, str]:
        return {
            "shift": str(self.shift),
            "b": str(self.b),
            "c": str(self.c),
            "var_re": str(self.var_re),
            "var_im": str(self.var_im),
        }


def clt_params(w) -> CltParams:
    """Centering and limiting variances of ``Tr(G_w) - shift * N``.

    The shift is ``a_w`` plus, for words that can produce projective
    planes, ``p_w``; the real and imaginary parts have variances
    ``(b+c)/2`` and ``(b-c)/2``.
    """
    sc = spherical_counts(as_word(w))
    return CltParams(
        shift=sc.a + sc.p,
        b=sc.b,
        c=sc.c,
        var_re=Fraction(sc.b + sc.c, 2),
        var_im=Fraction(sc.b - sc.c, 2),
    )


def _check_index(idx: Sequence[int]) -> tuple[int, ...]:
    idx = tuple(int(x) for x in idx)
    if not idx or len(idx) % 2 or any(x < 1 for x in idx):
        raise ValueError("index must be a non-empty even-length tuple of positive integers")
    return idx


def _alternating_face(base: Word, idx: tuple[int, ...]) -> Word:
    adj = star(base)
    letters: tuple[Letter, ...] = ()
    for i in range(0, len(idx), 2):
        letters += base.letters * idx[i] + adj.letters * idx[i + 1]
    return Word(letters)


def mixed_moment_limit(idx: Sequence[int]) -> int:
    """Limit of ``(1/N) E Tr(G^a1 G*^b1 ... G^ak G*^bk)``."""
    idx = _check_index(idx)
    if sum(idx[0::2]) != sum(idx[1::2]):
        return 0
    g = Word((Letter(Ensemble.GINIBRE_COMPLEX, 1),))
    return sphere_count([_alternating_face(g, idx)])


def word_mixed_moment_limit(w, idx: Sequence[int]) -> int:
    """Mixed moment of ``G_w`` counted directly, checked against the ``|w|``-scaled index."""
    w = as_word(w)
    _require_star_free(w)
    idx = _check_index(idx)
    if sum(idx[0::2]) != sum(idx[1::2]):
        direct = 0
    else:
        direct = sphere_count([_alternating_face(w, idx)])
    scaled = mixed_moment_limit([len(w) * x for x in idx])
    if direct != scaled:
        raise ConsistencyError(f"word count {direct} != scaled mixed moment {scaled}")
    return direct


def joint_trace_covariance(w, kmax: int) -> list[int]:
    """Limiting ``E|Tr G_w^j|^2 = j cop(w)`` for ``j = 1..kmax``."""
    w = as_word(w)
    _require_star_free(w)
    if kmax < 1:
        raise ValueError("kmax must be positive")
    cop = coperiod(w)
    out = []
    for j in range(1, kmax + 1):
        b = clt_params(w ** j).b
        if b != j * cop:
            raise ConsistencyError(f"b(w^{j}) = {b} but j * cop(w) = {j * cop}")
        out.append(b)
    return out


def linear_statistic_variance(w, coeffs: Sequence[complex]) -> float:
    """Limiting variance for ``f(z) = a_1 z + ... + a_n z^n``.

    ``coeffs`` lists ``a_1..a_n``; the constant term plays no role after
    centering.  The value is ``cop(w) * sum k |a_k|^2``.
    """
    w = as_word(w)
    _require_star_free(w)
    total = sum(k * abs(a) ** 2 for k, a in enumerate(coeffs, start=1))
    return coperiod(w) * total
