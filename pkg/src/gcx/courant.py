"""The canonical Courant algebroid TR^n ⊕ T*R^n with polynomial coefficients.

Sections are ``X + ξ`` with polynomial components; the bracket is the
Dorfman bracket ``[X, Y] + L_X η − i_Y dξ`` and the pairing is
``⟨X+ξ, Y+η⟩ = i_X η + i_Y ξ`` (no factor 1/2, so that it agrees with the
Poisson bracket of degree-1 lifts).

Identities quantified over all sections are checked on a *generating set*:
the basis sections ``∂_i`` and ``dx^i`` multiplied by every base monomial of
degree at most ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import identities
from .linalg import SparseEliminator
from .poly import Poly, as_fraction, monomials_up_to
from .superalgebra import invert_matrix

DEFAULT_DEGREE = 2


class PreconditionError(ValueError):
    """Input does not satisfy the hypotheses of the requested check."""


@dataclass(frozen=True)
class PolySection:
    vector: tuple[Poly, ...]
    form: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(self.vector))
        object.__setattr__(self, "form", tuple(self.form))
        if len(self.vector) != len(self.form):
            raise ValueError("vector and form parts must have the same length")
        n = len(self.vector)
        if any(p.nvars != n for p in self.vector + self.form):
            raise ValueError(f"components must be polynomials in {n} base variables")

    @property
    def n(self) -> int:
        return len(self.vector)

    @classmethod
    def zero(cls, n: int) -> "PolySection":
        z = Poly.zero(n)
        return cls((z,) * n, (z,) * n)

    @classmethod
    def d(cls, n: int, i: int, coeff: Poly | None = None) -> "PolySection":
        """``coeff · ∂_{i+1}``."""
        vec = [Poly.zero(n)] * n
        vec[i] = coeff if coeff is not None else Poly.const(n, 1)
        return cls(tuple(vec), (Poly.zero(n),) * n)

    @classmethod
    def dx(cls, n: int, i: int, coeff: Poly | None = None) -> "PolySection":
        """``coeff · dx^{i+1}``."""
        form = [Poly.zero(n)] * n
        form[i] = coeff if coeff is not None else Poly.const(n, 1)
        return cls((Poly.zero(n),) * n, tuple(form))

    def components(self) -> tuple[Poly, ...]:
        return self.vector + self.form

    @classmethod
    def from_components(cls, comps: Sequence[Poly]) -> "PolySection":
        n = len(comps) // 2
        return cls(tuple(comps[:n]), tuple(comps[n:]))

    def __add__(self, other: "PolySection") -> "PolySection":
        return PolySection(tuple(a + b for a, b in zip(self.vector, other.vector)),
                           tuple(a + b for a, b in zip(self.form, other.form)))

    def __sub__(self, other: "PolySection") -> "PolySection":
        return PolySection(tuple(a - b for a, b in zip(self.vector, other.vector)),
                           tuple(a - b for a, b in zip(self.form, other.form)))

    def __neg__(self) -> "PolySection":
        return PolySection(tuple(-a for a in self.vector), tuple(-a for a in self.form))

    def scale(self, f) -> "PolySection":
        """Multiply by a rational constant or a base polynomial."""
        return PolySection(tuple(a * f for a in self.vector), tuple(a * f for a in self.form))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components())

    def __str__(self) -> str:
        parts = [f"({p})*d{i + 1}" for i, p in enumerate(self.vector) if p]
        parts += [f"({p})*dx{i + 1}" for i, p in enumerate(self.form) if p]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"vector": [p.to_json() for p in self.vector],
                "form": [p.to_json() for p in self.form]}

    @classmethod
    def from_json(cls, n: int, data: dict) -> "PolySection":
        zero = [[]] * n
        return cls(tuple(Poly.from_json(n, p) for p in data.get("vector", zero)),
                   tuple(Poly.from_json(n, p) for p in data.get("form", zero)))


def _check_same(a: PolySection, b: PolySection) -> None:
    if a.n != b.n:
        raise ValueError(f"sections over R^{a.n} and R^{b.n}")


def dorfman(a: PolySection, b: PolySection) -> PolySection:
    """``(X+ξ)∘(Y+η) = [X,Y] + L_X η − i_Y dξ``."""
    _check_same(a, b)
    n = a.n
    X, xi, Y, eta = a.vector, a.form, b.vector, b.form
    zero = Poly.zero(n)
    vec = []
    for i in range(n):
        acc = zero
        for j in range(n):
            if X[j] and Y[i]:
                acc = acc + X[j] * Y[i].diff(j)
            if Y[j] and X[i]:
                acc = acc - Y[j] * X[i].diff(j)
        vec.append(acc)
    form = []
    for i in range(n):
        acc = zero
        for j in range(n):
            if X[j] and eta[i]:
                acc = acc + X[j] * eta[i].diff(j)
            if eta[j] and X[j]:
                acc = acc + eta[j] * X[j].diff(i)
            if Y[j]:
                curl = xi[i].diff(j) - xi[j].diff(i)
                if curl:
                    acc = acc - Y[j] * curl
        form.append(acc)
    return PolySection(tuple(vec), tuple(form))


def pairing(a: PolySection, b: PolySection) -> Poly:
    """``⟨X+ξ, Y+η⟩ = i_X η + i_Y ξ``."""
    _check_same(a, b)
    acc = Poly.zero(a.n)
    for i in range(a.n):
        acc = acc + a.vector[i] * b.form[i] + b.vector[i] * a.form[i]
    return acc


def anchor(a: PolySection, f: Poly) -> Poly:
    """``ρ(X+ξ)(f) = X(f)``."""
    acc = Poly.zero(a.n)
    for i, Xi in enumerate(a.vector):
        if Xi:
            acc = acc + Xi * f.diff(i)
    return acc


def generating_set(n: int, d: int = DEFAULT_DEGREE) -> list[PolySection]:
    """``∂_i · x^e`` and ``dx^i · x^e`` for every monomial ``x^e`` of degree ≤ d."""
    out = []
    for e in monomials_up_to(n, d):
        m = Poly.monomial(e)
        out += [PolySection.d(n, i, m) for i in range(n)]
        out += [PolySection.dx(n, i, m) for i in range(n)]
    return out


def base_monomials(n: int, d: int = DEFAULT_DEGREE) -> list[Poly]:
    return [Poly.monomial(e) for e in monomials_up_to(n, d)]


# -- (1,1)-tensors ------------------------------------------------------------

Block = tuple[tuple[Poly, ...], ...]


def _block(n: int, data) -> Block:
    rows = tuple(tuple(p if isinstance(p, Poly) else Poly.const(n, p) for p in row) for row in data)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"block must be {n}x{n}")
    return rows


def _zero_block(n: int) -> Block:
    return tuple((Poly.zero(n),) * n for _ in range(n))


def _eye_block(n: int, c=1) -> Block:
    return tuple(tuple(Poly.const(n, c if i == j else 0) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class GenEndomorphism:
    """Block (1,1)-tensor ``[[A, pi], [beta, D]]`` acting on columns ``(X, ξ)``.

    ``A: TM→TM``, ``pi: T*M→TM``, ``beta: TM→T*M``, ``D: T*M→T*M``; entry
    ``[i][j]`` sends component ``j`` of the source to component ``i``.
    """

    A: Block
    pi: Block
    beta: Block
    D: Block
    n: int = field(default=0)

    def __post_init__(self):
        n = self.n or len(self.A)
        object.__setattr__(self, "n", n)
        for name in ("A", "pi", "beta", "D"):
            object.__setattr__(self, name, _block(n, getattr(self, name)))

    @classmethod
    def blocks(cls, n: int, A=None, pi=None, beta=None, D=None) -> "GenEndomorphism":
        z = _zero_block(n)
        return cls(A if A is not None else z, pi if pi is not None else z,
                   beta if beta is not None else z, D if D is not None else z, n)

    @classmethod
    def identity(cls, n: int, c=1) -> "GenEndomorphism":
        return cls.blocks(n, A=_eye_block(n, c), D=_eye_block(n, c))

    @classmethod
    def zero(cls, n: int) -> "GenEndomorphism":
        return cls.blocks(n)

    @classmethod
    def from_matrix(cls, M: Sequence[Sequence]) -> "GenEndomorphism":
        n = len(M) // 2
        M = [[p if isinstance(p, Poly) else Poly.const(n, p) for p in row] for row in M]
        return cls(tuple(tuple(r[:n]) for r in M[:n]), tuple(tuple(r[n:]) for r in M[:n]),
                   tuple(tuple(r[:n]) for r in M[n:]), tuple(tuple(r[n:]) for r in M[n:]), n)

    def matrix(self) -> list[list[Poly]]:
        n = self.n
        return ([list(self.A[i]) + list(self.pi[i]) for i in range(n)]
                + [list(self.beta[i]) + list(self.D[i]) for i in range(n)])

    def is_constant(self) -> bool:
        return all(p.is_constant() for row in self.matrix() for p in row)

    def constant_matrix(self) -> list[list[Fraction]]:
        if not self.is_constant():
            raise ValueError("tensor has non-constant entries")
        return [[p.constant_term() for p in row] for row in self.matrix()]

    def __call__(self, s: PolySection) -> PolySection:
        comps = s.components()
        zero = Poly.zero(self.n)
        out = []
        for row in self.matrix():
            acc = zero
            for p, c in zip(row, comps):
                if p and c:
                    acc = acc + p * c
            out.append(acc)
        return PolySection.from_components(out)

    def __matmul__(self, other: "GenEndomorphism") -> "GenEndomorphism":
        A, B = self.matrix(), other.matrix()
        k = 2 * self.n
        zero = Poly.zero(self.n)
        out = [[sum((A[i][l] * B[l][j] for l in range(k)), zero) for j in range(k)]
               for i in range(k)]
        return GenEndomorphism.from_matrix(out)

    def __add__(self, other: "GenEndomorphism") -> "GenEndomorphism":
        return GenEndomorphism.from_matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix(), other.matrix())])

    def __sub__(self, other: "GenEndomorphism") -> "GenEndomorphism":
        return self + other.scale(-1)

    def scale(self, c) -> "GenEndomorphism":
        return GenEndomorphism.from_matrix([[a * c for a in r] for r in self.matrix()])

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.matrix() for p in row)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(p) for p in row) for row in self.matrix()) + "]"

    def to_json(self) -> dict:
        return {name: [[p.to_json() for p in row] for row in getattr(self, name)]
                for name in ("A", "pi", "beta", "D")}

    @classmethod
    def from_json(cls, n: int, data: dict) -> "GenEndomorphism":
        def blk(key):
            if key not in data:
                return _zero_block(n)
            return tuple(tuple(Poly.from_json(n, p) for p in row) for row in data[key])
        return cls(blk("A"), blk("pi"), blk("beta"), blk("D"), n)


def _transpose(b: Block) -> Block:
    return tuple(zip(*b))


def adjoint(N: GenEndomorphism) -> GenEndomorphism:
    """Adjoint for the pairing: blocks ``(Dᵀ, piᵀ, betaᵀ, Aᵀ)``."""
    return GenEndomorphism(_transpose(N.D), _transpose(N.pi), _transpose(N.beta),
                           _transpose(N.A), N.n)


def symplectic_structure(omega: Sequence[Sequence]) -> GenEndomorphism:
    """``N_ω`` with ``beta = ω``, ``pi = −ω⁻¹`` for a constant nondegenerate 2-form matrix."""
    n = len(omega)
    w = [[as_fraction(v) for v in row] for row in omega]
    winv = invert_matrix(w)
    return GenEndomorphism.blocks(n, pi=[[-v for v in row] for row in winv], beta=w)


def contracted(N: GenEndomorphism, a: PolySection, b: PolySection) -> PolySection:
    """``a ∘_N b = Na∘b + a∘Nb − N(a∘b)``."""
    return dorfman(N(a), b) + dorfman(a, N(b)) - N(dorfman(a, b))


def torsion_courant(N: GenEndomorphism, a: PolySection, b: PolySection) -> PolySection:
    """``Tor_N(a, b) = Na∘Nb − N(a ∘_N b)``."""
    return dorfman(N(a), N(b)) - N(contracted(N, a, b))


def torsion_violations(N: GenEndomorphism, d: int = DEFAULT_DEGREE) -> list[identities.Witness]:
    gens = generating_set(N.n, d)
    out = []
    for a, b in product(gens, repeat=2):
        t = torsion_courant(N, a, b)
        if not t.is_zero():
            out.append(identities.Witness("torsion", (a, b), t))
    return out


def delta_violations(delta: GenEndomorphism, d: int = DEFAULT_DEGREE, left: str = "all"):
    """Witnesses against ``X∘ΔZ = Δ(X∘Z)`` and against ``Δ(Y∘Y) = ΔY∘Y`` (polarized).

    ``left="vector"`` restricts the left factor X of the first identity to
    vector fields.
    """
    if left not in ("all", "vector"):
        raise ValueError("left must be 'all' or 'vector'")
    gens = generating_set(delta.n, d)
    commute, square = [], []
    images = [delta(g) for g in gens]
    for (i, X), (j, Z) in product(enumerate(gens), repeat=2):
        XZ = dorfman(X, Z)
        r = dorfman(X, images[j]) - delta(XZ)
        if not r.is_zero() and (left == "all" or is_vector_field(X)):
            commute.append(identities.Witness("commutes-with-left-multiplication", (X, Z), r))
        if j >= i:
            r = delta(XZ + dorfman(Z, X)) - dorfman(images[i], Z) - dorfman(images[j], X)
            if not r.is_zero():
                square.append(identities.Witness("square-rule", (X, Z), r))
    return commute, square


def delta_conditions(delta: GenEndomorphism, d: int = DEFAULT_DEGREE,
                     left: str = "all") -> tuple[bool, bool]:
    commute, square = delta_violations(delta, d, left)
    return not commute, not square


# -- irreducibility ------------------------------------------------------------

@dataclass(frozen=True)
class CommutantResult:
    """Solution spaces of the commutant system, each as a basis of tensors.

    ``stage1``: Δ commutes with left multiplication by vector fields (the
    left factors used in the irreducibility argument).  ``stage1_full``: Δ
    commutes with left multiplication by every generator.  ``stage2``: full
    commutation plus the square rule.
    """

    n: int
    coeff_degree: int
    stage1: tuple[GenEndomorphism, ...]
    stage1_full: tuple[GenEndomorphism, ...]
    stage2: tuple[GenEndomorphism, ...]

    @property
    def stage1_dimension(self) -> int:
        return len(self.stage1)

    @property
    def stage1_full_dimension(self) -> int:
        return len(self.stage1_full)

    @property
    def stage2_dimension(self) -> int:
        return len(self.stage2)


def _unknown_tensor(n: int, r: int, s: int, e: tuple[int, ...]) -> GenEndomorphism:
    k = 2 * n
    M = [[Poly.zero(n)] * k for _ in range(k)]
    M[r][s] = Poly.monomial(e)
    return GenEndomorphism.from_matrix(M)


def _residual_rows(residuals: Iterable[tuple[object, PolySection]], col: int, rows: dict) -> None:
    for tag, sec in residuals:
        for c, p in enumerate(sec.components()):
            for e, v in p.items():
                rows.setdefault((tag, c, e), {})[col] = v


def is_vector_field(s: PolySection) -> bool:
    return all(p.is_zero() for p in s.form)


def commutant_solve(n: int, coeff_degree: int = 2,
                    degree_bound: int = DEFAULT_DEGREE) -> CommutantResult:
    """Solve for all Δ with polynomial entries of degree ≤ ``coeff_degree``.

    The conditions ``X∘ΔZ = Δ(X∘Z)`` and the polarized square rule
    ``Δ(Y∘Z + Z∘Y) = ΔY∘Z + ΔZ∘Y`` are imposed on the generating set of
    degree ``degree_bound``.  Both are linear in Δ, so each unknown
    coefficient contributes one column and each solution space is the
    nullspace of an exact sparse system.
    """
    if coeff_degree < 0:
        raise ValueError("coeff_degree must be non-negative")
    gens = generating_set(n, degree_bound)
    k = 2 * n
    unknowns = [(r, s, e) for r in range(k) for s in range(k)
                for e in monomials_up_to(n, coeff_degree)]
    prods = {(i, j): dorfman(X, Z) for (i, X), (j, Z) in product(enumerate(gens), repeat=2)}
    vector_left = [is_vector_field(g) for g in gens]
    rows_vec: dict = {}
    rows_form: dict = {}
    rows_sq: dict = {}
    for col, (r, s, e) in enumerate(unknowns):
        T = _unknown_tensor(n, r, s, e)
        images = [T(g) for g in gens]
        res_vec, res_form, res_sq = [], [], []
        for i, X in enumerate(gens):
            target = res_vec if vector_left[i] else res_form
            for j, Z in enumerate(gens):
                target.append(((i, j), dorfman(X, images[j]) - T(prods[(i, j)])))
                if j >= i:
                    res_sq.append(((i, j), T(prods[(i, j)] + prods[(j, i)])
                                   - dorfman(images[i], Z) - dorfman(images[j], X)))
        _residual_rows(res_vec, col, rows_vec)
        _residual_rows(res_form, col, rows_form)
        _residual_rows(res_sq, col, rows_sq)
    elim = SparseEliminator(len(unknowns))
    spaces = []
    for rows in (rows_vec, rows_form, rows_sq):
        elim.add_rows(rows.values())
        spaces.append(tuple(_tensor_from_vector(n, unknowns, v) for v in elim.nullspace()))
    return CommutantResult(n, coeff_degree, *spaces)


def _tensor_from_vector(n: int, unknowns, v) -> GenEndomorphism:
    k = 2 * n
    M = [[Poly.zero(n)] * k for _ in range(k)]
    for (r, s, e), c in zip(unknowns, v):
        if c:
            M[r][s] = M[r][s] + Poly.monomial(e, c)
    return GenEndomorphism.from_matrix(M)


# -- classification -------------------------------------------------------------

COMPLEX, PRODUCT, TANGENT = "complex", "product", "tangent"
SCALED_COMPLEX, SCALED_PRODUCT, NONE = "scaled-complex", "scaled-product", "none"


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of the shift-and-square classification.

    ``lam``: N + N* = lam·I.  ``square``: (N − lam/2·I)² = square·I.
    ``gamma``: N² − lam·N + gamma·I = 0, i.e. gamma = lam²/4 − square.
    """

    lam: Fraction | None
    gamma: Fraction | None
    kind: str
    square: Fraction | None = None
    witnesses: tuple = ()

    def to_json(self) -> dict:
        def rat(v):
            return None if v is None else [v.numerator, v.denominator]
        return {"kind": self.kind, "lambda": rat(self.lam), "gamma": rat(self.gamma),
                "square": rat(self.square)}


def scalar_of(N: GenEndomorphism) -> Fraction | None:
    """``c`` if ``N = c·I`` with constant ``c``, else None."""
    M = N.matrix()
    c = M[0][0]
    if not c.is_constant():
        return None
    for i, row in enumerate(M):
        for j, p in enumerate(row):
            if p != (c if i == j else Poly.zero(N.n)):
                return None
    return c.constant_term()


def kind_from_square(square: Fraction) -> str:
    if square == 0:
        return TANGENT
    if square == -1:
        return COMPLEX
    if square == 1:
        return PRODUCT
    return SCALED_COMPLEX if square < 0 else SCALED_PRODUCT


def classify_courant_tensor(N: GenEndomorphism, d: int = DEFAULT_DEGREE) -> ClassificationResult:
    n = N.n
    lam = scalar_of(N + adjoint(N))
    if lam is None:
        return ClassificationResult(None, None, NONE,
                                    witnesses=(identities.Witness("N+N* not scalar", (N,), N + adjoint(N)),))
    M = N - GenEndomorphism.identity(n, lam / 2)
    tors = torsion_violations(M, d)
    if tors:
        return ClassificationResult(lam, None, NONE, witnesses=tuple(tors[:5]))
    sq = scalar_of(M @ M)
    if sq is None:
        return ClassificationResult(lam, None, NONE,
                                    witnesses=(identities.Witness("square not scalar", (M,), M @ M),))
    gamma = lam * lam / 4 - sq
    residue = N @ N - N.scale(lam) + GenEndomorphism.identity(n, gamma)
    if not residue.is_zero():
        raise AssertionError("quadratic relation fails after a successful shift")
    return ClassificationResult(lam, gamma, kind_from_square(sq), sq)


def orthogonal_square_violations(N: GenEndomorphism, d: int = DEFAULT_DEGREE) -> list[identities.Witness]:
    """For orthogonal torsion-free N: ``X∘N²Y = N²(X∘Y)`` and ``N²(Y∘Y) = N²Y∘Y``."""
    if not (N + adjoint(N)).is_zero():
        raise PreconditionError("tensor is not orthogonal (N + N* != 0)")
    if torsion_violations(N, d):
        raise PreconditionError("tensor has nonzero torsion on the generating set")
    N2 = N @ N
    commute, square = delta_violations(N2, d)
    return commute + square


def orthogonal_square_check(N: GenEndomorphism, d: int = DEFAULT_DEGREE) -> bool:
    return not orthogonal_square_violations(N, d)


theorem4_check = orthogonal_square_check


def twice_contracted(N: GenEndomorphism, a: PolySection, b: PolySection) -> PolySection:
    """``a (∘_N)_N b`` by applying the contraction twice."""
    return (contracted(N, N(a), b) + contracted(N, a, N(b)) - N(contracted(N, a, b)))


def squared_contraction_identity(N: GenEndomorphism, a: PolySection, b: PolySection) -> bool:
    """``a (∘_N)_N b = 2 Tor_N(a, b) + a ∘_{N²} b``."""
    N2 = N @ N
    lhs = twice_contracted(N, a, b)
    rhs = torsion_courant(N, a, b).scale(2) + dorfman(N2(a), b) + dorfman(a, N2(b)) - N2(dorfman(a, b))
    return (lhs - rhs).is_zero()


# -- whole-structure checks -------------------------------------------------------

def axiom_violations(n: int, d: int = DEFAULT_DEGREE) -> list[identities.Witness]:
    return identities.axiom_violations(generating_set(n, d), dorfman, pairing, anchor)


def jacobi_violations(n: int, d: int = 1) -> list[identities.Witness]:
    return identities.jacobi_violations(generating_set(n, d), dorfman)


def anchor_rule_violations(n: int, d: int = DEFAULT_DEGREE) -> list[identities.Witness]:
    return identities.anchor_rule_violations(
        generating_set(n, d), base_monomials(n, d), dorfman, anchor, lambda f, s: s.scale(f))


def contracted_anchor_rule_violations(N: GenEndomorphism, d: int = DEFAULT_DEGREE):
    """``X∘_N(fY) = f(X∘_N Y) + ρ(NX)(f)Y``."""
    return identities.anchor_rule_violations(
        generating_set(N.n, d), base_monomials(N.n, d),
        lambda a, b: contracted(N, a, b), lambda a, f: anchor(N(a), f),
        lambda f, s: s.scale(f))


def contracted_invariance_violations(N: GenEndomorphism, d: int = DEFAULT_DEGREE):
    """``ρ(NX)⟨Y,Z⟩ = ⟨X∘_N Y, Z⟩ + ⟨Y, X∘_N Z⟩`` on the generating set."""
    gens = generating_set(N.n, d)
    out = [w for w in identities.axiom_violations(
        gens, lambda a, b: contracted(N, a, b), pairing, lambda a, f: anchor(N(a), f))
        if w.identity == "invariance"]
    return out
