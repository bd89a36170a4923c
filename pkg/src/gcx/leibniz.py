"""Finite-dimensional Leibniz algebras over the rationals.

Structure constants are stored as an object-dtype array ``c[a, b, d]`` with
``e_a ∘ e_b = Σ_d c[a, b, d] e_d``.  A (1,1)-tensor is a square matrix acting
on coordinate columns, so ``N(e_a)`` is column ``a``.  Every identity
quantified over all elements is checked on basis elements, which is
exhaustive because all maps involved are multilinear.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .poly import as_fraction
from .superalgebra import invert_matrix

NIJENHUIS, WEAK_NIJENHUIS, NEITHER = "nijenhuis", "weak_nijenhuis", "neither"


def frac_array(data, shape=None) -> np.ndarray:
    arr = np.empty(np.shape(data) if shape is None else shape, dtype=object)
    flat = np.asarray(data, dtype=object).reshape(-1)
    arr.reshape(-1)[:] = [as_fraction(v) for v in flat]
    return arr


def zeros(*shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def identity(dim: int) -> np.ndarray:
    out = zeros(dim, dim)
    for i in range(dim):
        out[i, i] = Fraction(1)
    return out


def is_zero(arr: np.ndarray) -> bool:
    return all(v == 0 for v in arr.reshape(-1))


@dataclass(frozen=True, eq=False)
class LeibnizAlgebra:
    c: np.ndarray
    metric: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        c = frac_array(self.c)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError(f"structure constants must be dim x dim x dim, got {c.shape}")
        object.__setattr__(self, "c", c)
        if self.metric is not None:
            g = frac_array(self.metric)
            if g.shape != (self.dim, self.dim):
                raise ValueError(f"metric must be {self.dim}x{self.dim}")
            if any(g[i, j] != g[j, i] for i in range(self.dim) for j in range(self.dim)):
                raise ValueError("metric must be symmetric")
            invert_matrix(g.tolist())  # raises on degenerate metrics
            object.__setattr__(self, "metric", g)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def basis(self, a: int) -> np.ndarray:
        v = zeros(self.dim)
        v[a] = Fraction(1)
        return v

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("a,b,abd->d", x, y, self.c)

    def pair(self, x: np.ndarray, y: np.ndarray):
        if self.metric is None:
            raise ValueError("algebra has no metric")
        return x @ self.metric @ y

    def with_constants(self, c: np.ndarray, name: str = "") -> "LeibnizAlgebra":
        return LeibnizAlgebra(c, self.metric, name or self.name)

    def transform(self, P: np.ndarray) -> "LeibnizAlgebra":
        """Same algebra in the basis ``f_a = Σ_b P[b, a] e_b``."""
        P = frac_array(P)
        Pinv = frac_array(invert_matrix(P.tolist()))
        c = np.einsum("ia,jb,ijk,dk->abd", P, P, self.c, Pinv)
        g = None if self.metric is None else P.T @ self.metric @ P
        return LeibnizAlgebra(c, g, self.name)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "constants": _rat_json(self.c)}
        if self.metric is not None:
            out["metric"] = _rat_json(self.metric)
        return out


def _rat_json(arr: np.ndarray):
    if arr.ndim == 0:
        v = arr.item()
        return [v.numerator, v.denominator]
    return [_rat_json(sub) for sub in arr]


def from_products(dim: int, products: dict, metric=None, name: str = "") -> LeibnizAlgebra:
    """Build from ``{(a, b): {d: coeff}}`` with zero-based indices."""
    c = zeros(dim, dim, dim)
    for (a, b), image in products.items():
        for d, v in image.items():
            c[a, b, d] = as_fraction(v)
    return LeibnizAlgebra(c, metric, name)


def abelian(dim: int) -> LeibnizAlgebra:
    return LeibnizAlgebra(zeros(dim, dim, dim), identity(dim), "abelian")


def nilpotent_square() -> LeibnizAlgebra:
    """Two-dimensional algebra with ``e1 ∘ e1 = e2`` and all other products zero."""
    return from_products(2, {(0, 0): {1: 1}}, name="nilpotent")


def cross_product() -> LeibnizAlgebra:
    """R^3 with the vector cross product, ``c_ab^d = ε_abd``, metric identity."""
    c = zeros(3, 3, 3)
    for a, b, d in iproduct(range(3), repeat=3):
        if len({a, b, d}) == 3:
            c[a, b, d] = Fraction(1 if (a, b, d) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1)
    return LeibnizAlgebra(c, identity(3), "cross")


# -- identities ---------------------------------------------------------------

def jacobi_defect(L: LeibnizAlgebra, a: int, b: int, c: int) -> np.ndarray:
    """``(X∘Y)∘Z − X∘(Y∘Z) + Y∘(X∘Z)`` on basis elements."""
    X, Y, Z = L.basis(a), L.basis(b), L.basis(c)
    return (L.product(L.product(X, Y), Z) - L.product(X, L.product(Y, Z))
            + L.product(Y, L.product(X, Z)))


def jacobi_violations(L: LeibnizAlgebra) -> list[tuple[int, int, int]]:
    return [t for t in iproduct(range(L.dim), repeat=3) if not is_zero(jacobi_defect(L, *t))]


def jacobi_check(L: LeibnizAlgebra) -> bool:
    return all(is_zero(jacobi_defect(L, *t)) for t in iproduct(range(L.dim), repeat=3))


def _check_dim(L: LeibnizAlgebra, N: np.ndarray) -> np.ndarray:
    N = frac_array(N)
    if N.shape != (L.dim, L.dim):
        raise ValueError(f"tensor shape {N.shape} does not match algebra dimension {L.dim}")
    return N


def contracted_constants(c: np.ndarray, N: np.ndarray) -> np.ndarray:
    """Structure constants of ``X ∘_N Y = NX∘Y + X∘NY − N(X∘Y)``."""
    # N(e_a) = Σ_i N[i, a] e_i
    return (np.einsum("ia,ibd->abd", N, c) + np.einsum("jb,ajd->abd", N, c)
            - np.einsum("abk,dk->abd", c, N))


def contracted_product(L: LeibnizAlgebra, N) -> LeibnizAlgebra:
    """The deformed product ``∘_N``; Jacobi is not asserted."""
    N = _check_dim(L, N)
    return L.with_constants(contracted_constants(L.c, N), f"{L.name}_N")


def torsion(L: LeibnizAlgebra, N) -> np.ndarray:
    """``T[a, b] = N(e_a)∘N(e_b) − N(e_a ∘_N e_b)`` as a dim³ array."""
    N = _check_dim(L, N)
    first = np.einsum("ia,jb,ijd->abd", N, N, L.c)
    cN = contracted_constants(L.c, N)
    return first - np.einsum("abk,dk->abd", cN, N)


def cocycle_defect(L: LeibnizAlgebra, T: np.ndarray) -> np.ndarray:
    """Leibniz coboundary of a bilinear map ``T`` on all basis triples.

    Six terms, in order::

        T(X, Y∘Z) − T(X∘Y, Z) − T(Y, X∘Z) − T(X,Y)∘Z + X∘T(Y,Z) − Y∘T(X,Z)
    """
    T = frac_array(T)
    c = L.c
    t1 = np.einsum("bck,akd->abcd", c, T)
    t2 = np.einsum("abk,kcd->abcd", c, T)
    t3 = np.einsum("ack,bkd->abcd", c, T)
    t4 = np.einsum("abk,kcd->abcd", T, c)
    t5 = np.einsum("bck,akd->abcd", T, c)
    t6 = np.einsum("ack,bkd->abcd", T, c)
    return t1 - t2 - t3 - t4 + t5 - t6


def cocycle_check(L: LeibnizAlgebra, T: np.ndarray) -> bool:
    return is_zero(cocycle_defect(L, T))


@dataclass(frozen=True)
class NijenhuisReport:
    torsion_zero: bool
    cocycle: bool
    classification: str
    contracted_jacobi: bool = field(default=True)

    def __post_init__(self):
        if self.torsion_zero and not self.cocycle:
            raise AssertionError("vanishing torsion must be a cocycle")
        expected = NIJENHUIS if self.torsion_zero else WEAK_NIJENHUIS if self.cocycle else NEITHER
        if self.classification != expected:
            raise AssertionError(f"classification {self.classification} inconsistent with flags")


def classify_tensor(L: LeibnizAlgebra, N) -> NijenhuisReport:
    T = torsion(L, N)
    tz = is_zero(T)
    coc = tz or cocycle_check(L, T)
    jac = jacobi_check(contracted_product(L, N))
    if coc and not jac:
        # contradicts the cocycle criterion for the contracted product
        raise AssertionError("torsion is a cocycle but the contracted product is not Leibniz")
    kind = NIJENHUIS if tz else WEAK_NIJENHUIS if coc else NEITHER
    return NijenhuisReport(tz, coc, kind, jac)


def pencil(L: LeibnizAlgebra, N, lam) -> LeibnizAlgebra:
    """Product ``X ∘_N Y + λ X∘Y``."""
    N = _check_dim(L, N)
    return L.with_constants(contracted_constants(L.c, N) + L.c * as_fraction(lam))


def compatibility_pencil_check(L: LeibnizAlgebra, N, lam) -> bool:
    if classify_tensor(L, N).classification == NEITHER:
        raise ValueError("pencil is only tested for (weak) Nijenhuis tensors")
    return jacobi_check(pencil(L, N, lam))


def point_courant_violations(L: LeibnizAlgebra) -> list[dict]:
    """Basis instances violating the polarized ρ = 0 Courant axioms.

    Checks ``⟨X, Y∘Z + Z∘Y⟩ = 0`` and ``⟨X∘Y, Z⟩ + ⟨Y, X∘Z⟩ = 0``.
    """
    if L.metric is None:
        raise ValueError("point Courant check needs a metric")
    out = []
    for a, b, c in iproduct(range(L.dim), repeat=3):
        X, Y, Z = L.basis(a), L.basis(b), L.basis(c)
        v = L.pair(X, L.product(Y, Z) + L.product(Z, Y))
        if v != 0:
            out.append({"identity": "symmetric-part", "X": a, "Y": b, "Z": c, "value": v})
        v = L.pair(L.product(X, Y), Z) + L.pair(Y, L.product(X, Z))
        if v != 0:
            out.append({"identity": "invariance", "X": a, "Y": b, "Z": c, "value": v})
    return out


def point_courant_check(L: LeibnizAlgebra) -> bool:
    return not point_courant_violations(L)


def adjoint(L: LeibnizAlgebra, N) -> np.ndarray:
    """Adjoint for the metric: ``⟨Nx, y⟩ = ⟨x, N*y⟩``."""
    N = _check_dim(L, N)
    g = L.metric
    ginv = frac_array(invert_matrix(g.tolist()))
    return ginv @ N.T @ g


def is_orthogonal(L: LeibnizAlgebra, N) -> bool:
    return is_zero(_check_dim(L, N) + adjoint(L, N))


# -- random instances ---------------------------------------------------------

def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 5) -> np.ndarray:
    return frac_array([[random_rational(rng, bound) for _ in range(cols)] for _ in range(rows)])


def random_invertible(rng: random.Random, dim: int, bound: int = 5) -> np.ndarray:
    while True:
        P = random_matrix(rng, dim, dim, bound)
        try:
            invert_matrix(P.tolist())
            return P
        except ValueError:
            continue


def random_tensor(rng: random.Random, dim: int, family: str | None = None,
                  metric: np.ndarray | None = None) -> np.ndarray:
    """Random (1,1)-tensor drawn from a mix of families.

    Dense random tensors are almost never (weak) Nijenhuis, so sparse
    ±1 patterns and shifted scalar tensors are mixed in to exercise both
    outcomes.  ``skew`` gives ``g⁻¹S`` with S skew, which is orthogonal for
    the metric ``g`` (identity when omitted).
    """
    family = family or rng.choice(["dense", "sparse", "scalar", "nilpotent", "skew"])
    if family == "dense":
        return random_matrix(rng, dim, dim)
    if family == "sparse":
        N = zeros(dim, dim)
        for _ in range(rng.randint(1, dim)):
            N[rng.randrange(dim), rng.randrange(dim)] = Fraction(rng.choice([-1, 1]))
        return N
    if family == "scalar":
        N = identity(dim) * random_rational(rng)
        if rng.random() < 0.5:
            N[rng.randrange(dim), rng.randrange(dim)] += Fraction(rng.choice([-1, 1]))
        return N
    if family == "nilpotent":
        N = zeros(dim, dim)
        for i in range(dim):
            for j in range(i + 1, dim):
                if rng.random() < 0.5:
                    N[i, j] = random_rational(rng, 2)
        return N
    if family == "skew":
        S = zeros(dim, dim)
        for i in range(dim):
            for j in range(i + 1, dim):
                if rng.random() < 0.6:
                    S[i, j] = random_rational(rng, 2)
                    S[j, i] = -S[i, j]
        if metric is None:
            return S
        return frac_array(invert_matrix(frac_array(metric).tolist())) @ S
    raise ValueError(f"unknown tensor family {family!r}")


def random_leibniz(rng: random.Random, kind: str = "hemisemidirect") -> LeibnizAlgebra:
    """Random non-Lie Leibniz algebra of dimension 4 or 3, in a random basis.

    ``hemisemidirect``: g ⊕ V with g = span(e1, e2), [e1, e2] = e2, acting on
    V = R^2 by e1 ↦ A (random), e2 ↦ 0, product ``(x,u)∘(y,v) = ([x,y], x·v)``.
    ``nilpotent3``: e1∘e1 = e2, e1∘e2 = s·e3 (s random) in R^3.
    """
    if kind == "hemisemidirect":
        A = random_matrix(rng, 2, 2, 3)
        prods: dict = {(0, 1): {1: 1}, (1, 0): {1: -1}}
        for u in range(2):
            prods[(0, 2 + u)] = {2 + w: A[w, u] for w in range(2)}
        base = from_products(4, prods, name="hemisemidirect")
    elif kind == "nilpotent3":
        s = random_rational(rng, 3) or Fraction(1)
        base = from_products(3, {(0, 0): {1: 1}, (0, 1): {2: s}}, name="nilpotent3")
    else:
        raise ValueError(f"unknown algebra kind {kind!r}")
    return base.transform(random_invertible(rng, base.dim, 2))


def as_rational_vector(values: Sequence) -> np.ndarray:
    return frac_array(list(values))


# -- orthogonal torsion-free tensors ------------------------------------------------

def squared_contraction_defect(L: LeibnizAlgebra, N) -> np.ndarray:
    """``X(∘_N)_N Y − 2Tor_N(X,Y) − X∘_{N²}Y`` on basis pairs; zero for every N."""
    N = _check_dim(L, N)
    twice = contracted_constants(contracted_constants(L.c, N), N)
    return twice - 2 * torsion(L, N) - contracted_constants(L.c, N @ N)


def orthogonal_square_violations(L: LeibnizAlgebra, N) -> list[dict]:
    """``X∘N²Y = N²(X∘Y)`` and ``N²(Y∘Y) = N²Y∘Y`` (polarized) on basis pairs.

    Requires a metric, ``N + N* = 0`` and vanishing torsion.
    """
    N = _check_dim(L, N)
    if L.metric is None or not is_orthogonal(L, N):
        raise ValueError("tensor is not orthogonal")
    if not is_zero(torsion(L, N)):
        raise ValueError("tensor has nonzero torsion")
    N2 = N @ N
    out = []
    for a, b in iproduct(range(L.dim), repeat=2):
        X, Y = L.basis(a), L.basis(b)
        if not is_zero(L.product(X, N2 @ Y) - N2 @ L.product(X, Y)):
            out.append({"identity": "commute", "X": a, "Y": b})
        sym = N2 @ (L.product(X, Y) + L.product(Y, X)) - L.product(N2 @ X, Y) - L.product(N2 @ Y, X)
        if not is_zero(sym):
            out.append({"identity": "square", "X": a, "Y": b})
    return out
