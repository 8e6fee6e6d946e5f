"""Exhaustive check of ``E[prod Tr w_j]`` by summing over all index choices.

This route never forms a pairing.  Each product of matrix entries is
rewritten in terms of the independent Gaussian variables behind it, and
the expectation is taken from closed-form moments:

* complex ``z`` with ``E|z|^2 = s``: ``E[z^p conj(z)^q] = [p == q] p! s^p``
* real ``x`` with ``E x^2 = s``: ``E[x^n] = (n-1)!! s^(n/2)`` for even ``n``

GUE off-diagonal entries above the diagonal are complex and
``H[b, a] = conj(H[a, b])``; diagonal entries are real.  GOE entries are real
with variance ``2/N`` on the diagonal.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

from .errors import TooLargeError
from .pairings import Layout
from .words import Ensemble

MAX_N = 6
MAX_LENGTH = 10


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def brute_force_wick_oracle(words: Sequence, N: int, band: int | None = None) -> Fraction:
    """Exact ``E[prod Tr w_j]`` at size ``N`` by enumerating all indexations.

    With ``band = b`` the Ginibre entries vanish outside cyclic distance
    ``b`` of the diagonal and have variance ``1/l`` inside, ``l = min(2b+1, N)``.
    Raises :class:`TooLargeError` when ``N > 6`` or the total length exceeds 10.
    """
    if isinstance(words, str):
        words = [words]
    layout = Layout(words)
    m = layout.m
    if N < 1 or N > MAX_N or m > MAX_LENGTH:
        raise TooLargeError(f"oracle bounds are N <= {MAX_N} and total length <= {MAX_LENGTH}")
    if m % 2:
        return Fraction(0)
    scale = N if band is None else min(2 * band + 1, N)

    def in_band(a: int, b: int) -> bool:
        if band is None:
            return True
        d = abs(a - b)
        return min(d, N - d) <= band

    entries = [layout.entry(e) for e in range(m)]
    letters = layout.letters
    total = 0
    for idx in itertools.product(range(N), repeat=m):
        # variable -> [plain count, conjugate count] (complex) or [count] (real)
        cplx: dict = {}
        real: dict = {}
        zero = False
        for e in range(m):
            letter = letters[e]
            x, y = entries[e]
            a, b = idx[x], idx[y]
            if not in_band(a, b):
                zero = True
                break
            ens, r = letter.ensemble, letter.index
            if ens is Ensemble.GINIBRE_COMPLEX:
                slot = cplx.setdefault(("G", r, a, b), [0, 0])
                slot[1 if letter.conjugated else 0] += 1
            elif ens is Ensemble.GINIBRE_REAL:
                key = ("R", r, a, b)
                real[key] = real.get(key, 0) + 1
            elif ens is Ensemble.GUE:
                if letter.conjugated:
                    a, b = b, a
                if a == b:
                    key = ("H", r, a, a)
                    real[key] = real.get(key, 0) + 1
                else:
                    slot = cplx.setdefault(("H", r, min(a, b), max(a, b)), [0, 0])
                    slot[0 if a < b else 1] += 1
            else:
                key = ("S", r, min(a, b), max(a, b))
                real[key] = real.get(key, 0) + 1
        if zero:
            continue
        weight = 1
        for p, q in cplx.values():
            if p != q:
                weight = 0
                break
            weight *= math.factorial(p)
        if not weight:
            continue
        for key, n in real.items():
            if n % 2:
                weight = 0
                break
            weight *= _double_factorial(n - 1)
            if key[0] == "S" and key[2] == key[3]:
                weight *= 2 ** (n // 2)
        total += weight
    return Fraction(total, scale ** (m // 2))
