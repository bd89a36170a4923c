"""Courant structures as cubic Hamiltonians on a degree-2 symplectic chart.

A basis section ``e_a`` of the bundle is represented by the degree-1
function ``lift(e_a) = Σ_b g_ab θ^b``, so the Poisson bracket of two lifts
is the pairing.  For TR^n ⊕ T*R^n the chart is
:meth:`GradedContext.hyperbolic` and the dictionary reads ``∂_i ↦ ψ_i``,
``dx^i ↦ ξ^i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Mapping, Sequence

from . import identities
from .courant import PolySection
from .leibniz import LeibnizAlgebra, frac_array, random_rational
from .poly import Poly, as_fraction, monomials_up_to
from .superalgebra import (
    GradedContext,
    SuperPolynomial,
    homogeneous_part,
    invert_matrix,
    poisson_bracket,
)

COMPLEX, PRODUCT, TANGENT, OTHER = "complex", "product", "tangent", "other"


class DegreeError(ValueError):
    """An argument has the wrong degree for the operation."""


class NonOrthogonalError(ValueError):
    def __init__(self, a: int, c: int, value):
        super().__init__(f"tensor is not orthogonal: entry ({a}, {c}) of N^T g + g N is {value}")
        self.pair = (a, c)


def _require_degree(F: SuperPolynomial, degree: int, what: str) -> None:
    if not F.is_homogeneous(degree):
        raise DegreeError(f"{what} must be homogeneous of degree {degree}, got degrees {sorted(F.degrees())}")


def bracket(F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    return poisson_bracket(F, G)


# -- dictionary between sections and degree-1 functions --------------------------

def tangent_context(n: int) -> GradedContext:
    return GradedContext.hyperbolic(n)


def lift_basis(ctx: GradedContext, a: int) -> SuperPolynomial:
    """``lift(e_a) = Σ_b g_ab θ^b``."""
    out = ctx.zero()
    for b, gab in enumerate(ctx.g[a]):
        if gab:
            out = out + ctx.theta(b).scale(gab)
    return out


def lift_vector(ctx: GradedContext, coeffs: Sequence[Poly]) -> SuperPolynomial:
    """Degree-1 function of the section ``Σ_a coeffs[a] e_a``."""
    if len(coeffs) != ctx.m:
        raise ValueError(f"need {ctx.m} components, got {len(coeffs)}")
    out = ctx.zero()
    for a, f in enumerate(coeffs):
        if f:
            out = out + SuperPolynomial.from_base(ctx, f) * lift_basis(ctx, a)
    return out


def unlift_vector(F: SuperPolynomial) -> list[Poly]:
    """Inverse of :func:`lift_vector` on degree-1 functions without momenta."""
    ctx = F.ctx
    n = ctx.n
    for (even, mask), _ in F.terms.items():
        if bin(mask).count("1") != 1 or any(even[n:]):
            raise DegreeError("element is not a section (degree-1, linear in odd coordinates)")
    theta_coeffs = [F.coefficient_of((0,) * n, (b,)) for b in range(ctx.m)]
    ginv = ctx.g_inverse
    out = []
    for a in range(ctx.m):
        acc = Poly.zero(n)
        for b in range(ctx.m):
            if ginv[b][a] and theta_coeffs[b]:
                acc = acc + theta_coeffs[b] * ginv[b][a]
        out.append(acc)
    return out


def lift(s: PolySection, ctx: GradedContext | None = None) -> SuperPolynomial:
    """``X + ξ ↦ Σ X^i ψ_i + Σ ξ_i ξ^i`` in the hyperbolic chart."""
    ctx = ctx or tangent_context(s.n)
    if ctx.m != 2 * s.n or ctx.n != s.n:
        raise ValueError("section does not match the chart")
    return lift_vector(ctx, s.components())


def unlift(F: SuperPolynomial) -> PolySection:
    return PolySection.from_components(unlift_vector(F))


def generating_set(ctx: GradedContext, d: int = 2) -> list[SuperPolynomial]:
    """Basis lifts times every base monomial of degree ≤ d."""
    out = []
    for e in monomials_up_to(ctx.n, d):
        m = SuperPolynomial.from_base(ctx, Poly.monomial(e))
        out += [m * lift_basis(ctx, a) for a in range(ctx.m)]
    return out


def base_functions(ctx: GradedContext, d: int = 2) -> list[SuperPolynomial]:
    return [SuperPolynomial.from_base(ctx, Poly.monomial(e)) for e in monomials_up_to(ctx.n, d)]


# -- cubic Hamiltonians --------------------------------------------------------------

def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class CubicHamiltonianData:
    """Anchor functions ``rho[a][i] = ρ(e_a)(x^i)`` and ``phi[(a,b,c)] = ⟨e_a∘e_b, e_c⟩`` (a<b<c)."""

    ctx: GradedContext
    rho: tuple[tuple[Poly, ...], ...]
    phi: Mapping[tuple[int, int, int], Poly]

    def __post_init__(self):
        m, n = self.ctx.m, self.ctx.n
        rho = tuple(tuple(p if isinstance(p, Poly) else Poly.const(n, p) for p in row) for row in self.rho)
        if len(rho) != m or any(len(row) != n for row in rho):
            raise ValueError(f"rho must be {m}x{n}")
        phi = {}
        for key, p in dict(self.phi).items():
            if len(set(key)) != 3 or any(not 0 <= k < m for k in key):
                raise ValueError(f"invalid phi index {key}")
            p = p if isinstance(p, Poly) else Poly.const(n, p)
            sign = _perm_sign(key)
            k = tuple(sorted(key))
            phi[k] = phi.get(k, Poly.zero(n)) + p * sign
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", {k: v for k, v in sorted(phi.items()) if v})

    def phi_full(self, a: int, b: int, c: int) -> Poly:
        """Totally antisymmetric extension of ``phi``."""
        if len({a, b, c}) < 3:
            return Poly.zero(self.ctx.n)
        key = (a, b, c)
        base = self.phi.get(tuple(sorted(key)))
        if base is None:
            return Poly.zero(self.ctx.n)
        return base * _perm_sign(key)

    @classmethod
    def canonical(cls, n: int) -> "CubicHamiltonianData":
        """Anchor = projection to the vector part, φ = 0, in the hyperbolic chart."""
        ctx = tangent_context(n)
        rho = [[Poly.const(n, int(a == i)) for i in range(n)] for a in range(2 * n)]
        return cls(ctx, tuple(map(tuple, rho)), {})

    def to_json(self) -> dict:
        return {
            "n": self.ctx.n,
            "m": self.ctx.m,
            "g": [[[v.numerator, v.denominator] for v in row] for row in self.ctx.g],
            "rho": [[p.to_json() for p in row] for row in self.rho],
            "phi": [{"abc": [a + 1, b + 1, c + 1], "poly": p.to_json()}
                    for (a, b, c), p in sorted(self.phi.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CubicHamiltonianData":
        n, m = data["n"], data["m"]
        g = data.get("g") or [[int(a == b) for b in range(m)] for a in range(m)]
        ctx = GradedContext(n, m, tuple(tuple(as_fraction(v) for v in row) for row in g))
        zero_rho = [[[]] * n] * m
        rho = tuple(tuple(Poly.from_json(n, p) for p in row) for row in data.get("rho", zero_rho))
        phi: dict = {}
        for entry in data.get("phi", []):
            key = tuple(k - 1 for k in entry["abc"])
            if key in phi:
                raise ValueError(f"duplicate phi entry {entry['abc']}")
            phi[key] = Poly.from_json(n, entry["poly"])
        return cls(ctx, rho, phi)


def build_psi(data: CubicHamiltonianData) -> SuperPolynomial:
    """``Ψ = Σ θ^a ρ^i_a p_i − 1/6 Σ φ_abc θ^a θ^b θ^c``."""
    ctx = data.ctx
    psi = ctx.zero()
    for a in range(ctx.m):
        for i in range(ctx.n):
            r = data.rho[a][i]
            if r:
                psi = psi + ctx.theta(a) * SuperPolynomial.from_base(ctx, r) * ctx.p(i)
    sixth = Fraction(-1, 6)
    for a, b, c in permutations(range(ctx.m), 3):
        f = data.phi_full(a, b, c)
        if f:
            psi = psi + SuperPolynomial.from_base(ctx, f * sixth) * ctx.theta(a) * ctx.theta(b) * ctx.theta(c)
    return psi


def canonical_psi(n: int) -> SuperPolynomial:
    """``Σ ξ^i p_i`` in the hyperbolic chart."""
    return build_psi(CubicHamiltonianData.canonical(n))


def homological_check(psi: SuperPolynomial) -> bool:
    _require_degree(psi, 3, "Hamiltonian")
    return poisson_bracket(psi, psi).is_zero()


def derived_bracket(psi: SuperPolynomial, X: SuperPolynomial, Y: SuperPolynomial) -> SuperPolynomial:
    """``X∘Y = {{X, Ψ}, Y}``."""
    _require_degree(psi, 3, "Hamiltonian")
    _require_degree(X, 1, "left argument")
    _require_degree(Y, 1, "right argument")
    return poisson_bracket(poisson_bracket(X, psi), Y)


def derived_anchor(psi: SuperPolynomial, X: SuperPolynomial, f: SuperPolynomial) -> SuperPolynomial:
    """``ρ(X)(f) = {{X, Ψ}, f}``."""
    _require_degree(psi, 3, "Hamiltonian")
    _require_degree(X, 1, "section")
    _require_degree(f, 0, "function")
    return poisson_bracket(poisson_bracket(X, psi), f)


def extract_data(psi: SuperPolynomial) -> CubicHamiltonianData:
    """Recover ``ρ^i_a`` and ``φ_abc`` from Ψ through the derived operations."""
    _require_degree(psi, 3, "Hamiltonian")
    ctx = psi.ctx
    lifts = [lift_basis(ctx, a) for a in range(ctx.m)]
    hs = [poisson_bracket(L, psi) for L in lifts]
    rho = tuple(tuple(poisson_bracket(h, ctx.x(i)).to_base() for i in range(ctx.n)) for h in hs)
    phi = {}
    for a, b, c in combinations(range(ctx.m), 3):
        v = poisson_bracket(poisson_bracket(hs[a], lifts[b]), lifts[c]).to_base()
        if v:
            phi[(a, b, c)] = v
    return CubicHamiltonianData(ctx, rho, phi)


def structure_algebra(psi: SuperPolynomial) -> LeibnizAlgebra:
    """Constant structure constants of the derived bracket on basis lifts.

    Only meaningful when the bracket of basis lifts has constant
    coefficients (e.g. ρ = 0 and constant φ).
    """
    ctx = psi.ctx
    m = ctx.m
    lifts = [lift_basis(ctx, a) for a in range(m)]
    c = []
    for a in range(m):
        row = []
        for b in range(m):
            comps = unlift_vector(derived_bracket(psi, lifts[a], lifts[b]))
            if not all(p.is_constant() for p in comps):
                raise ValueError("derived bracket of basis lifts has non-constant coefficients")
            row.append([p.constant_term() for p in comps])
        c.append(row)
    return LeibnizAlgebra(frac_array(c), frac_array([list(r) for r in ctx.g]))


# -- quadratic representation of orthogonal tensors ------------------------------

def _matrix(M, m: int) -> list[list[Fraction]]:
    M = [[as_fraction(v) for v in row] for row in M]
    if len(M) != m or any(len(r) != m for r in M):
        raise ValueError(f"tensor must be {m}x{m}")
    return M


def orthogonality_defect(M, ctx: GradedContext) -> list[list[Fraction]]:
    """``Σ_b (N_a^b g_bc + N_c^b g_ab)`` with ``N(e_a) = Σ_b M[b][a] e_b``."""
    m = ctx.m
    M = _matrix(M, m)
    g = ctx.g
    return [[sum(M[b][a] * g[b][c] + M[b][c] * g[a][b] for b in range(m)) for c in range(m)]
            for a in range(m)]


def n_to_quadratic(M, ctx: GradedContext) -> SuperPolynomial:
    """``Q = 1/2 Σ N_a^b g_bc θ^c θ^a`` for an orthogonal tensor (column convention)."""
    m = ctx.m
    M = _matrix(M, m)
    for a, row in enumerate(orthogonality_defect(M, ctx)):
        for c, v in enumerate(row):
            if v:
                raise NonOrthogonalError(a, c, v)
    half = Fraction(1, 2)
    Q = ctx.zero()
    for a, b, c in product(range(m), repeat=3):
        coeff = M[b][a] * ctx.g[b][c]
        if coeff and a != c:
            Q = Q + ctx.theta(c) * ctx.theta(a) * (coeff * half)
    return Q


def _check_quadratic(Q: SuperPolynomial) -> None:
    n = Q.ctx.n
    for (even, mask), _ in Q.terms.items():
        if bin(mask).count("1") != 2 or any(even[n:]):
            raise DegreeError("quadratic element must be built from θθ terms only")
        if any(even[:n]):
            raise ValueError("quadratic element has non-constant coefficients")


def quadratic_to_n(Q: SuperPolynomial) -> list[list[Fraction]]:
    """Matrix of ``X ↦ {Q, X}`` on basis lifts (column ``a`` is the image of ``e_a``)."""
    _check_quadratic(Q)
    ctx = Q.ctx
    cols = [unlift_vector(poisson_bracket(Q, lift_basis(ctx, a))) for a in range(ctx.m)]
    return [[cols[a][b].constant_term() for a in range(ctx.m)] for b in range(ctx.m)]


def apply_quadratic(Q: SuperPolynomial, X: SuperPolynomial) -> SuperPolynomial:
    """``N(X) = {Q, X}``."""
    return poisson_bracket(Q, X)


def contracted_generator(psi: SuperPolynomial, Q: SuperPolynomial) -> SuperPolynomial:
    """``{Ψ, Q}``, the Hamiltonian of the contracted bracket."""
    _require_degree(psi, 3, "Hamiltonian")
    _require_degree(Q, 2, "quadratic element")
    return poisson_bracket(psi, Q)


def double_bracket(psi: SuperPolynomial, Q: SuperPolynomial) -> SuperPolynomial:
    return poisson_bracket(contracted_generator(psi, Q), Q)


def double_bracket_classify(psi: SuperPolynomial, Q: SuperPolynomial) -> str:
    R = double_bracket(psi, Q)
    if R.is_zero():
        return TANGENT
    if R == -psi:
        return COMPLEX
    if R == psi:
        return PRODUCT
    return OTHER


def weak_nijenhuis_cocycle_check(psi: SuperPolynomial, Q: SuperPolynomial) -> bool:
    """Whether ``{{Ψ,Q},Q}`` is closed under ``{Ψ, ·}``."""
    if not homological_check(psi):
        raise ValueError("Hamiltonian is not homological")
    return poisson_bracket(psi, double_bracket(psi, Q)).is_zero()


def contracted_generator_is_homological(psi: SuperPolynomial, Q: SuperPolynomial) -> bool:
    """``{{Ψ,Q},{Ψ,Q}} = 0``, computed directly."""
    h = contracted_generator(psi, Q)
    return poisson_bracket(h, h).is_zero()


# -- contracted brackets through the bracket engine --------------------------------

def contracted_bracket(psi, Q, X, Y) -> SuperPolynomial:
    """``NX∘Y + X∘NY − N(X∘Y)`` with ``N = {Q, ·}``."""
    N = lambda Z: poisson_bracket(Q, Z)  # noqa: E731
    return derived_bracket(psi, N(X), Y) + derived_bracket(psi, X, N(Y)) - N(derived_bracket(psi, X, Y))


def torsion(psi, Q, X, Y) -> SuperPolynomial:
    N = lambda Z: poisson_bracket(Q, Z)  # noqa: E731
    return derived_bracket(psi, N(X), N(Y)) - N(contracted_bracket(psi, Q, X, Y))


def torsion_generator_identity(psi, Q, X, Y) -> bool:
    """``X (∘_N)_N Y = 2 Tor_N(X,Y) + X ∘_{N²} Y`` with each side computed separately."""
    N = lambda Z: poisson_bracket(Q, Z)  # noqa: E731
    N2 = lambda Z: N(N(Z))  # noqa: E731
    cN = lambda A, B: contracted_bracket(psi, Q, A, B)  # noqa: E731
    twice = cN(N(X), Y) + cN(X, N(Y)) - N(cN(X, Y))
    squared = (derived_bracket(psi, N2(X), Y) + derived_bracket(psi, X, N2(Y))
               - N2(derived_bracket(psi, X, Y)))
    return twice == torsion(psi, Q, X, Y).scale(2) + squared


# -- checks over generating sets ---------------------------------------------------------

def axiom_violations(psi: SuperPolynomial, d: int = 2, limit: int | None = None):
    """Polarized Courant axioms for the derived bracket, pairing and anchor."""
    gens = generating_set(psi.ctx, d)
    return identities.axiom_violations(
        gens, lambda X, Y: derived_bracket(psi, X, Y), poisson_bracket,
        lambda X, f: derived_anchor(psi, X, f), limit=limit)


def jacobi_violations(psi: SuperPolynomial, d: int = 1, limit: int | None = None):
    gens = generating_set(psi.ctx, d)
    return identities.jacobi_violations(gens, lambda X, Y: derived_bracket(psi, X, Y), limit=limit)


# -- random instances -------------------------------------------------------------------

def _random_poly(rng: random.Random, n: int, degree: int, density: float = 0.5) -> Poly:
    terms = {e: random_rational(rng, 3) for e in monomials_up_to(n, degree) if rng.random() < density}
    return Poly(n, terms)


def random_cubic_data(rng: random.Random, ctx: GradedContext, degree: int = 1) -> CubicHamiltonianData:
    """Random anchor and φ with polynomial entries of degree ≤ ``degree``."""
    rho = tuple(tuple(_random_poly(rng, ctx.n, degree) for _ in range(ctx.n)) for _ in range(ctx.m))
    phi = {k: _random_poly(rng, ctx.n, degree) for k in combinations(range(ctx.m), 3)}
    return CubicHamiltonianData(ctx, rho, phi)


def random_skew_quadratic(rng: random.Random, ctx: GradedContext) -> SuperPolynomial:
    """Random constant element of the span of ``θ^a θ^b``."""
    Q = ctx.zero()
    for a, b in combinations(range(ctx.m), 2):
        c = random_rational(rng, 3)
        if c:
            Q = Q + ctx.theta(a) * ctx.theta(b) * c
    return Q


def cayley_orthogonal(S: Sequence[Sequence]) -> list[list[Fraction]]:
    """Rational orthogonal matrix ``(I − S)(I + S)^{-1}`` for skew ``S``."""
    m = len(S)
    S = [[as_fraction(v) for v in row] for row in S]
    I_minus = [[Fraction(int(i == j)) - S[i][j] for j in range(m)] for i in range(m)]
    I_plus = [[Fraction(int(i == j)) + S[i][j] for j in range(m)] for i in range(m)]
    inv = invert_matrix(I_plus)
    return [[sum(I_minus[i][k] * inv[k][j] for k in range(m)) for j in range(m)] for i in range(m)]


def degree_part(F: SuperPolynomial, k: int) -> SuperPolynomial:
    return homogeneous_part(F, k)
