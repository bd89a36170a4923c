"""Sparse multivariate polynomials over the rationals in base coordinates x^1..x^n.

A polynomial is a mapping from exponent tuples to nonzero ``Fraction``
coefficients; the zero polynomial is the empty mapping.  Instances are
immutable and hashable so they can sit inside frozen dataclasses.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Coerce int / str / Fraction / ``[num, den]`` pair to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        num, den = value
        return Fraction(int(num), int(den))
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(value)


class Poly:
    """Polynomial in ``nvars`` commuting variables with exact coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                c = as_fraction(c)
                if c != 0:
                    if len(exp) != nvars:
                        raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
                    clean[tuple(exp)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "Poly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        c = as_fraction(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        """The coordinate x^(i+1) (``i`` is zero based)."""
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff=1) -> "Poly":
        exp = tuple(exp)
        return cls(len(exp), {exp: coeff})

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def _check(self, other: "Poly") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"polynomials over {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = as_fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.nvars, out)

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "Poly":
        """Partial derivative with respect to x^(i+1)."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly._raw(self.nvars, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        """``[[num, den, [exponents...]], ...]`` in sorted exponent order."""
        return [
            [c.numerator, c.denominator, list(e)]
            for e, c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, nvars: int, data) -> "Poly":
        if isinstance(data, (int, str)) or (
            isinstance(data, list) and len(data) == 2 and all(isinstance(v, int) for v in data)
        ):
            # bare constant: 3, "1/2" or [num, den]
            return cls.const(nvars, as_fraction(data))
        terms: dict[Exponent, Fraction] = {}
        for num, den, exp in data:
            exp = tuple(int(k) for k in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent vector {list(exp)} has length != {nvars}")
            terms[exp] = terms.get(exp, Fraction(0)) + Fraction(int(num), int(den))
        return cls(nvars, terms)


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree <= ``degree``, graded then lexicographic."""
    out: list[Exponent] = []
    for d in range(degree + 1):
        block = set()
        for combo in combinations_with_replacement(range(nvars), d):
            exp = [0] * nvars
            for i in combo:
                exp[i] += 1
            block.add(tuple(exp))
        out.extend(sorted(block, reverse=True))
    return out
