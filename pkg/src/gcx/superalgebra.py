"""Functions on a degree-2 symplectic N-manifold in a Darboux chart.

Coordinates are ``x^i`` (degree 0), odd ``θ^a`` (degree 1) and ``p_i``
(degree 2).  A :class:`SuperPolynomial` is stored in canonical form: a dict
keyed by ``(even_exponents, odd_mask)`` where ``even_exponents`` lists the
powers of ``x^1..x^n`` followed by ``p_1..p_n`` and bit ``a`` of ``odd_mask``
records the presence of ``θ^(a+1)``.  Odd factors are always read in
increasing index order, which fixes every sign.

Bracket convention (the only place it is written down)::

    {F, G} = Σ_i (∂F/∂p_i ∂G/∂x^i − ∂F/∂x^i ∂G/∂p_i)
             + (−1)^(|F|+1) Σ_{a,b} g^{ab} ∂F/∂θ^a ∂G/∂θ^b

with left derivatives and ``|F|`` the parity of F.  This gives
``{p_i, x^j} = δ_i^j``, ``{θ^a, θ^b} = g^{ab}`` and makes the derived
bracket ``{{X, Ψ}, Y}`` of ``Ψ = Σ ξ^i p_i`` equal to the Dorfman bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .poly import Poly, as_fraction

BASE, ODD, MOMENTUM = "base", "odd", "momentum"
_KIND_DEGREE = {BASE: 0, ODD: 1, MOMENTUM: 2}


class ContextMismatch(ValueError):
    """Raised when operands live in different Darboux charts."""


@dataclass(frozen=True)
class GradedCoordinate:
    name: str
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_DEGREE:
            raise ValueError(f"unknown coordinate kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("coordinate indices start at 1")

    @property
    def degree(self) -> int:
        return _KIND_DEGREE[self.kind]

    @property
    def parity(self) -> int:
        return self.degree % 2


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


def invert_matrix(g: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact Gauss-Jordan inverse; raises ``ValueError`` if singular."""
    m = len(g)
    aug = [list(map(as_fraction, row)) + [Fraction(int(i == j)) for j in range(m)]
           for i, row in enumerate(g)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[m:]) for row in aug)


@dataclass(frozen=True)
class GradedContext:
    """Darboux chart: base dimension ``n``, odd rank ``m`` and metric ``g``."""

    n: int
    m: int
    g: tuple[tuple[Fraction, ...], ...]
    odd_names: tuple[str, ...] | None = None
    g_inverse: tuple[tuple[Fraction, ...], ...] = field(init=False, compare=False, repr=False)
    _ginv_pairs: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        g = _frac_matrix(self.g)
        object.__setattr__(self, "g", g)
        if len(g) != self.m or any(len(row) != self.m for row in g):
            raise ValueError(f"metric must be {self.m}x{self.m}")
        if any(g[a][b] != g[b][a] for a in range(self.m) for b in range(self.m)):
            raise ValueError("metric must be symmetric")
        ginv = invert_matrix(g) if self.m else ()
        object.__setattr__(self, "g_inverse", ginv)
        pairs = tuple(
            tuple((b, ginv[a][b]) for b in range(self.m) if ginv[a][b] != 0)
            for a in range(self.m)
        )
        object.__setattr__(self, "_ginv_pairs", pairs)
        if self.odd_names is not None and len(self.odd_names) != self.m:
            raise ValueError("need one name per odd coordinate")

    @classmethod
    def identity(cls, n: int, m: int) -> "GradedContext":
        return cls(n, m, tuple(tuple(int(a == b) for b in range(m)) for a in range(m)))

    @classmethod
    def hyperbolic(cls, n: int) -> "GradedContext":
        """Chart of T*[2]T[1]R^n: odd ``ξ^1..ξ^n, ψ_1..ψ_n`` with ``{ξ^i, ψ_j} = δ``."""
        g = [[int(abs(a - b) == n) for b in range(2 * n)] for a in range(2 * n)]
        names = tuple(f"xi{i + 1}" for i in range(n)) + tuple(f"psi{i + 1}" for i in range(n))
        return cls(n, 2 * n, tuple(map(tuple, g)), names)

    def odd_name(self, a: int) -> str:
        return self.odd_names[a] if self.odd_names else f"t{a + 1}"

    def coordinates(self) -> list[GradedCoordinate]:
        out = [GradedCoordinate(f"x{i}", BASE, i) for i in range(1, self.n + 1)]
        out += [GradedCoordinate(self.odd_name(a - 1), ODD, a) for a in range(1, self.m + 1)]
        out += [GradedCoordinate(f"p{i}", MOMENTUM, i) for i in range(1, self.n + 1)]
        return out

    def coordinate(self, kind: str, index: int) -> GradedCoordinate:
        bound = self.m if kind == ODD else self.n
        if not 1 <= index <= bound:
            raise ValueError(f"{kind} coordinate index {index} out of range")
        name = self.odd_name(index - 1) if kind == ODD else ("x" if kind == BASE else "p") + str(index)
        return GradedCoordinate(name, kind, index)

    # shorthands returning SuperPolynomials, zero-based indices
    def x(self, i: int) -> "SuperPolynomial":
        return SuperPolynomial.coordinate(self, self.coordinate(BASE, i + 1))

    def p(self, i: int) -> "SuperPolynomial":
        return SuperPolynomial.coordinate(self, self.coordinate(MOMENTUM, i + 1))

    def theta(self, a: int) -> "SuperPolynomial":
        return SuperPolynomial.coordinate(self, self.coordinate(ODD, a + 1))

    def one(self) -> "SuperPolynomial":
        return SuperPolynomial.constant(self, 1)

    def zero(self) -> "SuperPolynomial":
        return SuperPolynomial(self, {})


Key = tuple[tuple[int, ...], int]


def _popcount(v: int) -> int:
    return v.bit_count()


def _bits(mask: int) -> Iterator[int]:
    a = 0
    while mask:
        if mask & 1:
            yield a
        mask >>= 1
        a += 1


def _odd_product_sign(left: int, right: int) -> int:
    """Sign from sorting ``left·right`` into increasing order; 0 if they share a factor."""
    if left & right:
        return 0
    if not left or not right:
        return 1
    swaps = 0
    for j in _bits(right):
        swaps += (left >> (j + 1)).bit_count()
    return -1 if swaps & 1 else 1


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    even_exponents: tuple[int, ...]
    odd_factors: tuple[int, ...]

    @property
    def degree(self) -> int:
        n = len(self.even_exponents) // 2
        return 2 * sum(self.even_exponents[n:]) + len(self.odd_factors)


class SuperPolynomial:
    """Immutable element of the graded algebra of functions, in canonical form."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: GradedContext, terms: Mapping[Key, Fraction]):
        self.ctx = ctx
        self._terms = {k: c for k, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, ctx: GradedContext, terms: dict) -> "SuperPolynomial":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, ctx: GradedContext, value) -> "SuperPolynomial":
        c = as_fraction(value)
        return cls._raw(ctx, {((0,) * (2 * ctx.n), 0): c} if c else {})

    @classmethod
    def coordinate(cls, ctx: GradedContext, c: GradedCoordinate) -> "SuperPolynomial":
        even = [0] * (2 * ctx.n)
        mask = 0
        if c.kind == BASE:
            even[c.index - 1] = 1
        elif c.kind == MOMENTUM:
            even[ctx.n + c.index - 1] = 1
        else:
            mask = 1 << (c.index - 1)
        return cls._raw(ctx, {(tuple(even), mask): Fraction(1)})

    @classmethod
    def from_monomial(cls, ctx: GradedContext, coeff, x_exps=None, p_exps=None,
                      odd: Iterable[int] = ()) -> "SuperPolynomial":
        """Build ``coeff · x^x_exps p^p_exps θ^odd[0] θ^odd[1] ...`` (odd zero based, any order)."""
        x_exps = tuple(x_exps or (0,) * ctx.n)
        p_exps = tuple(p_exps or (0,) * ctx.n)
        out = cls.constant(ctx, coeff)
        out = out * cls._raw(ctx, {(x_exps + p_exps, 0): Fraction(1)})
        for a in odd:
            out = out * ctx.theta(a)
        return out

    @classmethod
    def from_base(cls, ctx: GradedContext, f: Poly) -> "SuperPolynomial":
        """Embed a base polynomial as a degree-0 function."""
        if f.nvars != ctx.n:
            raise ContextMismatch(f"base polynomial in {f.nvars} variables, chart has n={ctx.n}")
        pad = (0,) * ctx.n
        return cls._raw(ctx, {(e + pad, 0): c for e, c in f.items()})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return self._terms

    def monomials(self) -> Iterator[Monomial]:
        for (even, mask), c in sorted(self._terms.items()):
            yield Monomial(c, even, tuple(_bits(mask)))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _term_degree(self, key: Key) -> int:
        even, mask = key
        return 2 * sum(even[self.ctx.n:]) + _popcount(mask)

    def degrees(self) -> set[int]:
        return {self._term_degree(k) for k in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (degree is None or degree in ds)

    def parity(self) -> int:
        """Parity of a parity-homogeneous element (0 for zero)."""
        ps = {_popcount(m) & 1 for _, m in self._terms}
        if len(ps) > 1:
            raise ValueError("element is not of homogeneous parity")
        return ps.pop() if ps else 0

    def to_base(self) -> Poly:
        """Inverse of :meth:`from_base`; raises unless the element lies in degree 0."""
        n = self.ctx.n
        out = {}
        for (even, mask), c in self._terms.items():
            if mask or any(even[n:]):
                raise ValueError("element is not a base function")
            out[even[:n]] = c
        return Poly(n, out)

    def coefficient_of(self, p_exps: tuple[int, ...], odd: Iterable[int]) -> Poly:
        """Base-polynomial coefficient of ``p^p_exps θ^odd`` (odd factors sorted ascending)."""
        mask = 0
        for a in odd:
            mask |= 1 << a
        n = self.ctx.n
        out = {}
        for (even, m), c in self._terms.items():
            if m == mask and even[n:] == tuple(p_exps):
                out[even[:n]] = c
        return Poly(n, out)

    # -- arithmetic ---------------------------------------------------------
    def _same(self, other: "SuperPolynomial") -> None:
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch("operands belong to different graded contexts")

    def _coerce(self, other) -> "SuperPolynomial":
        if isinstance(other, SuperPolynomial):
            self._same(other)
            return other
        if isinstance(other, Poly):
            return SuperPolynomial.from_base(self.ctx, other)
        return SuperPolynomial.constant(self.ctx, other)

    def __add__(self, other) -> "SuperPolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        _accumulate(out, other._terms.items())
        return SuperPolynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial._raw(self.ctx, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "SuperPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SuperPolynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "SuperPolynomial":
        c = as_fraction(c)
        if not c:
            return self.ctx.zero()
        return SuperPolynomial._raw(self.ctx, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "SuperPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self, self._coerce(other))

    def __rmul__(self, other) -> "SuperPolynomial":
        if isinstance(other, Poly):
            return multiply(self._coerce(other), self)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, SuperPolynomial):
            return self.ctx == other.ctx and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPolynomial.constant(self.ctx, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        n = self.ctx.n
        parts = []
        for (even, mask), c in sorted(self._terms.items(), key=lambda kv: (self._term_degree(kv[0]), kv[0])):
            factors = [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(even[:n]) if k]
            factors += [f"p{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(even[n:]) if k]
            factors += [self.ctx.odd_name(a) for a in _bits(mask)]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _accumulate(out: dict, items) -> None:
    for k, c in items:
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def _add_even(e1: tuple[int, ...], e2: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(e1, e2))


def multiply(F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """Supercommutative product in canonical form."""
    F._same(G)
    out: dict = {}
    for (e1, m1), c1 in F._terms.items():
        for (e2, m2), c2 in G._terms.items():
            sign = _odd_product_sign(m1, m2)
            if not sign:
                continue
            k = (_add_even(e1, e2), m1 | m2)
            s = out.get(k, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return SuperPolynomial._raw(F.ctx, out)


def _even_index(ctx: GradedContext, c: GradedCoordinate) -> int:
    return c.index - 1 if c.kind == BASE else ctx.n + c.index - 1


def partial(F: SuperPolynomial, c: GradedCoordinate) -> SuperPolynomial:
    """Derivative along ``c``; for odd ``c`` this is the left derivative."""
    ctx = F.ctx
    if c.kind == ODD:
        if not 1 <= c.index <= ctx.m:
            raise ContextMismatch(f"odd coordinate {c.index} not in chart with m={ctx.m}")
        a = c.index - 1
        bit = 1 << a
        below = bit - 1
        out = {}
        for (even, mask), v in F._terms.items():
            if mask & bit:
                out[(even, mask ^ bit)] = -v if _popcount(mask & below) & 1 else v
        return SuperPolynomial._raw(ctx, out)
    if not 1 <= c.index <= ctx.n:
        raise ContextMismatch(f"coordinate {c.name} not in chart with n={ctx.n}")
    i = _even_index(ctx, c)
    out = {}
    for (even, mask), v in F._terms.items():
        k = even[i]
        if k:
            out[(even[:i] + (k - 1,) + even[i + 1:], mask)] = v * k
    return SuperPolynomial._raw(ctx, out)


def poisson_bracket(F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """Degree −2 Poisson superbracket ``{F, G}`` of the chart."""
    F._same(G)
    ctx = F.ctx
    n = ctx.n
    pairs = ctx._ginv_pairs
    out: dict = {}
    g_items = [(e2, m2, c2, [(i, e2[i], e2[n + i]) for i in range(n) if e2[i] or e2[n + i]])
               for (e2, m2), c2 in G._terms.items()]
    for (e1, m1), c1 in F._terms.items():
        odd_sign = 1 if m1.bit_count() & 1 else -1  # (−1)^(|F|+1)
        left_odd = []
        for a in _bits(m1):
            bit = 1 << a
            s = -1 if (m1 & (bit - 1)).bit_count() & 1 else 1
            left_odd.append((a, m1 ^ bit, odd_sign * s))
        for e2, m2, c2, even2 in g_items:
            contribs = []
            if even2:
                sign = _odd_product_sign(m1, m2)
                if sign:
                    for i, x2, p2 in even2:
                        p1, x1 = e1[n + i], e1[i]
                        # ∂F/∂p_i ∂G/∂x^i − ∂F/∂x^i ∂G/∂p_i
                        if p1 and x2:
                            ee = list(_add_even(e1, e2))
                            ee[n + i] -= 1
                            ee[i] -= 1
                            contribs.append(((tuple(ee), m1 | m2), sign * p1 * x2))
                        if x1 and p2:
                            ee = list(_add_even(e1, e2))
                            ee[i] -= 1
                            ee[n + i] -= 1
                            contribs.append(((tuple(ee), m1 | m2), -sign * x1 * p2))
            if left_odd and m2:
                ee = None
                for a, rest1, s1 in left_odd:
                    for b, gab in pairs[a]:
                        bit = 1 << b
                        if not m2 & bit:
                            continue
                        rest2 = m2 ^ bit
                        s3 = _odd_product_sign(rest1, rest2)
                        if not s3:
                            continue
                        if (m2 & (bit - 1)).bit_count() & 1:
                            s3 = -s3
                        if ee is None:
                            ee = _add_even(e1, e2)
                        contribs.append(((ee, rest1 | rest2), gab if s1 * s3 > 0 else -gab))
            if contribs:
                cc = c1 * c2
                for key, f in contribs:
                    out[key] = out.get(key, 0) + (cc if f == 1 else -cc if f == -1 else cc * f)
    return SuperPolynomial._raw(ctx, {k: v for k, v in out.items() if v})


def degree_components(F: SuperPolynomial) -> dict[int, SuperPolynomial]:
    """Split ``F`` into homogeneous pieces keyed by degree."""
    buckets: dict[int, dict] = {}
    for k, c in F._terms.items():
        buckets.setdefault(F._term_degree(k), {})[k] = c
    return {d: SuperPolynomial._raw(F.ctx, t) for d, t in sorted(buckets.items())}


def homogeneous_part(F: SuperPolynomial, degree: int) -> SuperPolynomial:
    return degree_components(F).get(degree, F.ctx.zero())


def random_homogeneous(rng, ctx: GradedContext, degree: int, terms: int = 3,
                       base_degree: int = 2, bound: int = 3) -> SuperPolynomial:
    """Random element of degree ``degree`` with up to ``terms`` monomials.

    ``rng`` is a :class:`random.Random`; coefficients are integers in
    ``[-bound, bound]``, base exponents total at most ``base_degree``.
    """
    out = ctx.zero()
    n, m = ctx.n, ctx.m
    for _ in range(terms):
        k = rng.randint(0, min(degree // 2, 2)) if n else 0
        odd_count = degree - 2 * k
        if odd_count > m or (k and not n):
            continue
        p_exps = [0] * n
        for _ in range(k):
            p_exps[rng.randrange(n)] += 1
        x_exps = [0] * n
        for _ in range(rng.randint(0, base_degree) if n else 0):
            x_exps[rng.randrange(n)] += 1
        odd = rng.sample(range(m), odd_count)
        out = out + SuperPolynomial.from_monomial(ctx, rng.randint(-bound, bound), x_exps, p_exps, odd)
    return out
