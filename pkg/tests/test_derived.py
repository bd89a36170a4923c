import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from gcx import courant as co
from gcx import derived as dv
from gcx import leibniz as lb
from gcx.poly import Poly
from gcx.superalgebra import GradedContext, SuperPolynomial, poisson_bracket, random_homogeneous

S = co.PolySection
OMEGA_M = [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
PRODUCT_M = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]


def t2():
    return dv.tangent_context(2)


def cross_data():
    ctx = GradedContext.identity(0, 3)
    return dv.CubicHamiltonianData(ctx, ((), (), ()), {(0, 1, 2): 1})


# -- Hamiltonians -----------------------------------------------------------------

def test_canonical_psi():
    ctx = t2()
    assert dv.canonical_psi(2) == ctx.theta(0) * ctx.p(0) + ctx.theta(1) * ctx.p(1)


def test_cross_product_psi():
    ctx = GradedContext.identity(0, 3)
    assert dv.build_psi(cross_data()) == -(ctx.theta(0) * ctx.theta(1) * ctx.theta(2))
    assert dv.build_psi(dv.CubicHamiltonianData(ctx, ((), (), ()), {})).is_zero()


def test_phi_antisymmetry():
    ctx = GradedContext.identity(0, 3)
    a = dv.CubicHamiltonianData(ctx, ((), (), ()), {(1, 0, 2): 2})
    assert a.phi == {(0, 1, 2): Poly.const(0, -2)}
    assert a.phi_full(2, 1, 0) == Poly.const(0, 2)
    assert a.phi_full(0, 0, 1).is_zero()


def test_homological_examples():
    assert dv.homological_check(dv.canonical_psi(3))
    assert dv.homological_check(dv.build_psi(cross_data()))
    L = dv.structure_algebra(dv.build_psi(cross_data()))
    assert lb.jacobi_check(L)


def test_homological_agrees_with_leibniz_oracle():
    rng = random.Random(9)
    verdicts = set()
    for m in (4, 5):
        ctx = GradedContext.identity(0, m)
        for _ in range(6):
            phi = {k: rng.randint(-2, 2) for k in combinations(range(m), 3)}
            psi = dv.build_psi(dv.CubicHamiltonianData(ctx, ((),) * m, phi))
            flag = dv.homological_check(psi)
            assert flag == lb.jacobi_check(dv.structure_algebra(psi))
            verdicts.add(flag)
    assert verdicts == {True, False}


def test_homological_requires_cubic():
    with pytest.raises(dv.DegreeError):
        dv.homological_check(t2().p(0))


# -- derived bracket and anchor ---------------------------------------------------------

def test_derived_bracket_examples():
    ctx, psi = t2(), dv.canonical_psi(2)
    x1 = Poly.var(2, 0)
    got = dv.derived_bracket(psi, dv.lift(S.d(2, 0)), dv.lift(S.dx(2, 1, x1)))
    assert got == dv.lift(S.dx(2, 1)) == dv.lift(co.dorfman(S.d(2, 0), S.dx(2, 1, x1)))
    assert dv.derived_bracket(psi, dv.lift(S.dx(2, 0)), dv.lift(S.d(2, 1))).is_zero()
    assert dv.derived_bracket(ctx.zero(), ctx.theta(0), ctx.theta(1)).is_zero()


def test_derived_bracket_degree_checks():
    ctx, psi = t2(), dv.canonical_psi(2)
    with pytest.raises(dv.DegreeError):
        dv.derived_bracket(psi, ctx.p(0), ctx.theta(0))


@pytest.mark.parametrize("n", [1, 2])
def test_dictionary(n):
    ctx, psi = dv.tangent_context(n), dv.canonical_psi(n)
    gens = co.generating_set(n, 2)
    for a, b in product(gens, repeat=2):
        assert dv.derived_bracket(psi, dv.lift(a), dv.lift(b)) == dv.lift(co.dorfman(a, b))
        assert poisson_bracket(dv.lift(a), dv.lift(b)) == _base(ctx, co.pairing(a, b))


def _base(ctx, p):
    return SuperPolynomial.from_base(ctx, p)


def test_derived_anchor_examples():
    ctx, psi = t2(), dv.canonical_psi(2)
    f = _base(ctx, Poly.var(2, 0) * Poly.var(2, 1))
    assert dv.derived_anchor(psi, dv.lift(S.d(2, 0)), f) == _base(ctx, Poly.var(2, 1))
    assert dv.derived_anchor(psi, dv.lift(S.dx(2, 0)), f).is_zero()
    assert dv.derived_anchor(dv.build_psi(cross_data()), GradedContext.identity(0, 3).theta(0),
                             GradedContext.identity(0, 3).one()).is_zero()


def test_lift_unlift_roundtrip():
    a = S.d(2, 0, Poly.var(2, 1)) + S.dx(2, 1, Poly.const(2, Fraction(2, 3)))
    assert dv.unlift(dv.lift(a)) == a


# -- extraction ----------------------------------------------------------------------

def test_extract_roundtrip_random():
    rng = random.Random(2)
    ctx = GradedContext.hyperbolic(2)
    for _ in range(5):
        data = dv.random_cubic_data(rng, ctx, 1)
        back = dv.extract_data(dv.build_psi(data))
        assert back.rho == data.rho and back.phi == data.phi


def test_json_roundtrip():
    rng = random.Random(3)
    data = dv.random_cubic_data(rng, GradedContext.identity(1, 3), 1)
    assert dv.CubicHamiltonianData.from_json(data.to_json()) == data


def test_json_rejects_duplicate_phi():
    with pytest.raises(ValueError):
        dv.CubicHamiltonianData.from_json({"n": 0, "m": 3, "phi": [{"abc": [1, 2, 3], "poly": 1},
                                                                    {"abc": [1, 2, 3], "poly": 2}]})


# -- quadratic elements --------------------------------------------------------------

@pytest.mark.parametrize("M", [OMEGA_M, PRODUCT_M], ids=["omega", "product"])
def test_quadratic_action_on_basis(M):
    ctx = t2()
    Q = dv.n_to_quadratic(M, ctx)
    for a in range(4):
        image = dv.lift_vector(ctx, [Poly.const(2, M[b][a]) for b in range(4)])
        assert poisson_bracket(Q, dv.lift_basis(ctx, a)) == image
    assert dv.quadratic_to_n(Q) == [[Fraction(v) for v in row] for row in M]


def test_quadratic_zero_and_hand_example():
    ctx = GradedContext.identity(0, 2)
    assert dv.n_to_quadratic([[0, 0], [0, 0]], ctx).is_zero()
    assert dv.quadratic_to_n(ctx.zero()) == [[0, 0], [0, 0]]
    # {ξ1ξ2, ξ1} = −ξ2, {ξ1ξ2, ξ2} = ξ1
    assert dv.quadratic_to_n(ctx.theta(0) * ctx.theta(1)) == [[0, 1], [-1, 0]]


def test_non_orthogonal_rejected():
    with pytest.raises(dv.NonOrthogonalError) as err:
        dv.n_to_quadratic([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], t2())
    assert err.value.pair == (0, 2)


def test_double_bracket_classification():
    ctx, psi = t2(), dv.canonical_psi(2)
    Qw = dv.n_to_quadratic(OMEGA_M, ctx)
    Qp = dv.n_to_quadratic(PRODUCT_M, ctx)
    assert dv.double_bracket(psi, Qw) == -psi
    assert dv.double_bracket(psi, Qp) == psi
    assert dv.double_bracket_classify(psi, Qw) == dv.COMPLEX
    assert dv.double_bracket_classify(psi, Qp) == dv.PRODUCT
    assert dv.double_bracket_classify(psi, ctx.zero()) == dv.TANGENT
    for Q in (Qw, Qp, ctx.zero()):
        assert dv.weak_nijenhuis_cocycle_check(psi, Q)


def test_contracted_generator_for_product_is_bracket():
    ctx, psi = t2(), dv.canonical_psi(2)
    h = dv.contracted_generator(psi, dv.n_to_quadratic(PRODUCT_M, ctx))
    gens = dv.generating_set(ctx, 1)
    for X, Y in product(gens, repeat=2):
        assert dv.derived_bracket(h, X, Y) == dv.derived_bracket(psi, X, Y)
    assert dv.contracted_generator(ctx.zero(), dv.n_to_quadratic(PRODUCT_M, ctx)).is_zero()


def test_contracted_generator_gives_contracted_bracket():
    rng = random.Random(6)
    ctx = t2()
    psi = dv.canonical_psi(2)
    gens = dv.generating_set(ctx, 1)
    for _ in range(3):
        Q = dv.random_skew_quadratic(rng, ctx)
        h = dv.contracted_generator(psi, Q)
        for X, Y in product(gens, repeat=2):
            assert dv.derived_bracket(h, X, Y) == dv.contracted_bracket(psi, Q, X, Y)


def test_contracted_bracket_matches_courant():
    ctx, psi = t2(), dv.canonical_psi(2)
    Q = dv.n_to_quadratic(OMEGA_M, ctx)
    N = co.symplectic_structure([[0, -1], [1, 0]])
    for a, b in product(co.generating_set(2, 1), repeat=2):
        assert dv.contracted_bracket(psi, Q, dv.lift(a), dv.lift(b)) == dv.lift(co.contracted(N, a, b))


def test_cocycle_flag_matches_direct_check():
    rng = random.Random(12)
    ctx = GradedContext.identity(0, 4)
    for _ in range(6):
        phi = {k: rng.randint(-2, 2) for k in combinations(range(4), 3)}
        psi = dv.build_psi(dv.CubicHamiltonianData(ctx, ((),) * 4, phi))
        Q = dv.random_skew_quadratic(rng, ctx)
        assert dv.weak_nijenhuis_cocycle_check(psi, Q) == dv.contracted_generator_is_homological(psi, Q)


def test_cocycle_rejects_non_homological():
    ctx = GradedContext.identity(0, 5)
    psi = dv.build_psi(dv.CubicHamiltonianData(ctx, ((),) * 5, {(0, 1, 2): 1, (2, 3, 4): 1}))
    with pytest.raises(ValueError):
        dv.weak_nijenhuis_cocycle_check(psi, ctx.zero())


def test_torsion_identity():
    ctx, psi = t2(), dv.canonical_psi(2)
    gens = dv.generating_set(ctx, 1)
    Qw = dv.n_to_quadratic(OMEGA_M, ctx)
    for X, Y in product(gens, repeat=2):
        assert dv.torsion(psi, Qw, X, Y).is_zero()
        assert dv.torsion_generator_identity(psi, Qw, X, Y)
        assert dv.torsion_generator_identity(psi, ctx.zero(), X, Y)


def test_torsion_identity_random_orthogonal():
    rng = random.Random(15)
    ctx = GradedContext.identity(0, 4)
    psi = dv.build_psi(dv.CubicHamiltonianData(ctx, ((),) * 4, {(0, 1, 2): 1, (1, 2, 3): 2}))
    lifts = [ctx.theta(a) for a in range(4)]
    for _ in range(3):
        Sk = [[0] * 4 for _ in range(4)]
        for a, b in combinations(range(4), 2):
            Sk[a][b] = rng.randint(-2, 2)
            Sk[b][a] = -Sk[a][b]
        Q = dv.n_to_quadratic(Sk, ctx)
        for X, Y in product(lifts, repeat=2):
            assert dv.torsion_generator_identity(psi, Q, X, Y)


def test_differential_squares_to_zero():
    rng = random.Random(4)
    ctx = t2()
    psi = dv.canonical_psi(2)
    for _ in range(10):
        F = random_homogeneous(rng, ctx, rng.randint(0, 4))
        assert poisson_bracket(psi, poisson_bracket(psi, F)).is_zero()


def test_cayley_orthogonal():
    R = dv.cayley_orthogonal([[0, 1, 2], [-1, 0, Fraction(1, 2)], [-2, Fraction(-1, 2), 0]])
    for i, j in product(range(3), repeat=2):
        assert sum(R[k][i] * R[k][j] for k in range(3)) == int(i == j)
