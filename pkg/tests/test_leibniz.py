import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

import oracles
from gcx import leibniz as lb


def nil2():
    return lb.nilpotent_square()


def shift():
    # N(e1) = e2, N(e2) = 0
    return lb.frac_array([[0, 0], [1, 0]])


# -- jacobi ----------------------------------------------------------------

def test_cross_product_matches_epsilon():
    L = lb.cross_product()
    for a, b, d in product(range(3), repeat=3):
        assert L.c[a, b, d] == oracles.epsilon(a, b, d)


@pytest.mark.parametrize("L", [lb.abelian(3), nil2(), lb.cross_product()], ids=["abelian", "nil2", "cross"])
def test_jacobi_examples(L):
    assert lb.jacobi_check(L)
    assert oracles.jacobi_holds(oracles.constants(L))


def test_jacobi_failure_reports_triples():
    # e1∘e1 = e1 + e2, e2∘e1 = e2 is not Leibniz
    L = lb.from_products(2, {(0, 0): {0: 1, 1: 1}, (1, 0): {1: 1}, (0, 1): {0: 1}})
    assert lb.jacobi_check(L) == oracles.jacobi_holds(oracles.constants(L))


@pytest.mark.parametrize("kind", ["hemisemidirect", "nilpotent3"])
def test_random_leibniz_is_leibniz_and_not_lie(kind):
    rng = random.Random(11)
    for _ in range(5):
        L = lb.random_leibniz(rng, kind)
        assert lb.jacobi_check(L)
        c = L.c
        assert not lb.is_zero(c + np.transpose(c, (1, 0, 2)))


# -- contracted product and torsion ---------------------------------------------------

def test_contracted_identity_and_zero():
    L = lb.cross_product()
    assert lb.is_zero(lb.contracted_product(L, lb.identity(3)).c - L.c)
    assert lb.is_zero(lb.contracted_product(L, lb.zeros(3, 3)).c)


def test_contracted_matches_expansion_oracle():
    L = lb.cross_product()
    N = lb.frac_array([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    got = lb.contracted_product(L, N).c
    want = oracles.contracted_constants(oracles.constants(L), oracles.mat(N))
    assert got.tolist() == want


def test_torsion_scalar_vanishes():
    L = lb.cross_product()
    assert lb.is_zero(lb.torsion(L, lb.identity(3) * Fraction(5, 2)))


def test_torsion_nilpotent_shift_vanishes():
    L, N = nil2(), shift()
    for a, b in product(range(2), repeat=2):
        assert oracles.torsion(oracles.constants(L), oracles.mat(N), oracles.basis(2, a), oracles.basis(2, b)) == [0, 0]
    assert lb.is_zero(lb.torsion(L, N))


def test_torsion_random_matches_oracle():
    rng = random.Random(5)
    L = lb.cross_product()
    c = oracles.constants(L)
    for _ in range(10):
        N = lb.random_matrix(rng, 3, 3)
        T = lb.torsion(L, N)
        for a, b in product(range(3), repeat=2):
            want = oracles.torsion(c, oracles.mat(N), oracles.basis(3, a), oracles.basis(3, b))
            assert list(T[a, b]) == want


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        lb.torsion(lb.cross_product(), lb.identity(2))


# -- cocycle and classification -----------------------------------------------------------

def test_cocycle_trivial_cases():
    L = lb.cross_product()
    assert lb.cocycle_check(L, lb.zeros(3, 3, 3))
    rng = random.Random(2)
    A = lb.abelian(3)
    T = lb.frac_array([[[lb.random_rational(rng) for _ in range(3)] for _ in range(3)] for _ in range(3)])
    assert lb.cocycle_check(A, T)


def test_classify_examples():
    assert lb.classify_tensor(lb.cross_product(), lb.identity(3)).classification == lb.NIJENHUIS
    assert lb.classify_tensor(nil2(), shift()).classification == lb.NIJENHUIS


def test_classify_finds_neither_on_dim4():
    rng = random.Random(21)
    L = lb.random_leibniz(rng, "hemisemidirect")
    found = 0
    for _ in range(40):
        N = lb.random_tensor(rng, 4, "dense")
        rep = lb.classify_tensor(L, N)
        if rep.classification == lb.NEITHER:
            found += 1
            if not rep.contracted_jacobi:
                assert not oracles.jacobi_holds(oracles.constants(lb.contracted_product(L, N)))
                return
    pytest.fail(f"no tensor with failing contracted Jacobi among {found} 'neither' tensors")


def test_report_consistency_guard():
    with pytest.raises(AssertionError):
        lb.NijenhuisReport(True, False, lb.NIJENHUIS)


# -- metric and pencil ---------------------------------------------------------------

def test_point_courant_examples():
    assert lb.point_courant_check(lb.cross_product())
    A = lb.LeibnizAlgebra(lb.zeros(2, 2, 2), lb.frac_array([[2, 1], [1, 3]]))
    assert lb.point_courant_check(A)
    L = lb.LeibnizAlgebra(nil2().c, lb.identity(2))
    ws = lb.point_courant_violations(L)
    assert not lb.point_courant_check(L)
    # ⟨e2, e1∘e1⟩ = 1
    assert any(w["identity"] == "symmetric-part" and (w["X"], w["Y"], w["Z"]) == (1, 0, 0) for w in ws)


def test_point_courant_needs_metric():
    with pytest.raises(ValueError):
        lb.point_courant_check(nil2())


def test_metric_validation():
    with pytest.raises(ValueError):
        lb.LeibnizAlgebra(lb.zeros(2, 2, 2), lb.frac_array([[1, 2], [0, 1]]))


def test_pencil_examples():
    L = lb.cross_product()
    for lam in (0, 1, Fraction(-7, 3)):
        assert lb.compatibility_pencil_check(L, lb.identity(3), lam)
    for lam in (1, -1, 3):
        assert lb.compatibility_pencil_check(nil2(), shift(), lam)
        assert oracles.jacobi_holds(oracles.constants(lb.pencil(nil2(), shift(), lam)))


def test_adjoint_and_orthogonality():
    L = lb.cross_product()
    R = lb.frac_array([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    assert lb.is_orthogonal(L, R)
    assert not lb.is_orthogonal(L, lb.identity(3))


def test_squared_contraction_identity_random():
    rng = random.Random(8)
    for kind in ("hemisemidirect", "nilpotent3"):
        L = lb.random_leibniz(rng, kind)
        for _ in range(5):
            N = lb.random_tensor(rng, L.dim)
            assert lb.is_zero(lb.squared_contraction_defect(L, N))


def test_orthogonal_square_on_cross_rotation():
    L = lb.cross_product()
    R = lb.frac_array([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    if lb.is_zero(lb.torsion(L, R)):
        assert lb.orthogonal_square_violations(L, R) == []
    else:
        with pytest.raises(ValueError):
            lb.orthogonal_square_violations(L, R)
    assert lb.orthogonal_square_violations(L, lb.zeros(3, 3)) == []
