"""Exact Laurent polynomials in one variable ``N`` with integer coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping


class LaurentPolynomial:
    """Finite sum ``sum c_k N^k`` with ``k`` in Z and integer ``c_k``.

    Zero coefficients are never stored.  Instances are immutable and
    hashable; arithmetic returns new objects.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            c = int(c)
            if c:
                clean[int(k)] = c
        self._coeffs = clean

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coeff})

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._coeffs)

    def coefficient(self, exponent: int) -> int:
        return self._coeffs.get(exponent, 0)

    @property
    def degree(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    @property
    def low_degree(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def leading_coefficient(self) -> int:
        return self._coeffs[self.degree] if self._coeffs else 0

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial({k: c * other for k, c in self._coeffs.items()})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        out: dict[int, int] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPolynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def evaluate(self, n) -> Fraction:
        """Exact value at an integer (or rational) ``N``."""
        n = Fraction(n)
        total = Fraction(0)
        for k, c in self._coeffs.items():
            total += c * n**k
        return total

    __call__ = evaluate

    def to_json_dict(self) -> dict[str, str]:
        """Exponent to decimal-string map, the on-disk format."""
        return {str(k): str(c) for k, c in sorted(self._coeffs.items(), reverse=True)}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, str]) -> "LaurentPolynomial":
        return cls({int(k): int(v) for k, v in data.items()})

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "LaurentPolynomial":
        return cls.from_json_dict(json.loads(text))

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for k in sorted(self._coeffs, reverse=True):
            c = self._coeffs[k]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                var = "N" if k == 1 else f"N^{k}"
                body = var if a == 1 else f"{a}{var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPolynomial({self._coeffs!r})"


ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
