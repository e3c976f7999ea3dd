import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.errors import DimensionShortfall
from ksw.quadspace import QuadSpace
from ksw.reptheory import (Cocharacter, LieAlgebraRep, algebra_closed, commutant, doubling_check,
                           grading, identify_k3_group, is_k3_cocharacter, is_weak_hodge,
                           isotypic_decompose, product_sl2, product_sl2_fullness)
from ksw.scalars import NumberField, rationals
from ksw.so4quat import DET_GRAM, sl2_basis, sl2pair_action

Q = rationals()


def unit(i, j, n):
    return [[Fraction(int(a == i and b == j)) for b in range(n)] for a in range(n)]


def so_basis(k, n=None):
    n = n or k
    return [la.mat_sub(unit(i, j, n), unit(j, i, n)) for i in range(k) for j in range(i + 1, k)]


def test_commutants():
    assert len(commutant(LieAlgebraRep([], 3, check=False))) == 9
    assert len(commutant(LieAlgebraRep(so_basis(3)))) == 1
    basis = sl2_basis(Q)
    so4 = [la.to_rational_matrix(sl2pair_action(A, la.zeros(2, 2))) for A in basis] + \
          [la.to_rational_matrix(sl2pair_action(la.zeros(2, 2), B)) for B in basis]
    assert len(commutant(LieAlgebraRep(so4))) == 1


def test_commutant_is_unital_algebra():
    C = commutant(LieAlgebraRep(so_basis(3, 5)))
    assert algebra_closed(C)


def test_grading_cases():
    flat = Cocharacter(la.identity(3), [0, 0, 0])
    assert grading(flat, 3)["dims"] == {0: 3}
    lines = Cocharacter(la.identity(3), [-1, 0, 1])
    assert grading(lines, 3)["dims"] == {-1: 1, 0: 1, 1: 1}
    G = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    # isotropic flag: e1 + e3, e2, e1 - e3
    P = [[1, 0, 1], [0, 1, 0], [1, 0, -1]]
    g = grading(Cocharacter(P, [-1, 0, 1]), 3, G)
    assert g["orthogonal"]
    u, w = g["spaces"][-1][0], g["spaces"][1][0]
    assert sum(u[i] * G[i][i] * w[i] for i in range(3)) != 0


def test_k3_cocharacters():
    P = la.identity(4)
    assert is_k3_cocharacter(Cocharacter(P, [-1, 0, 0, 1]))
    assert not is_k3_cocharacter(Cocharacter(la.identity(3), [-2, 0, 2]))
    assert not is_k3_cocharacter(Cocharacter(P, [-1, -1, 1, 1]))


def test_weak_hodge():
    mu = Cocharacter(la.identity(4), [-1, 0, 0, 1])
    assert is_weak_hodge(mu, {-1: 1, 0: 2, 1: 1})
    assert not is_weak_hodge(mu, {-1: 1, 0: 3, 1: 1})
    assert is_weak_hodge(Cocharacter(la.identity(2), [0, 0]), {0: 2})


def test_isotypic_cases():
    d = isotypic_decompose(LieAlgebraRep([], 3, check=False), la.identity(3))
    assert [s.label for s in d.summands] == ["invariants"]
    d = isotypic_decompose(LieAlgebraRep(so_basis(3, 4)), la.identity(4))
    assert [(s.label, s.dim) for s in d.summands] == [("invariants", 1), ("first_kind", 3)]
    assert d.summands[1].field.degree == 1
    d = isotypic_decompose(LieAlgebraRep(so_basis(2)), la.identity(2))
    (s,) = d.summands
    assert s.label == "second_kind"
    # the commutant field is imaginary quadratic
    a, b, _ = s.field.min_poly
    assert b * b - 4 * a < 0


def test_identify_groups():
    (s,) = isotypic_decompose(LieAlgebraRep(so_basis(3)), la.identity(3)).summands
    g = identify_k3_group(s)
    assert (g.group, g.predicted_dim, g.attained) == ("SO", 3, True)
    (s,) = isotypic_decompose(LieAlgebraRep(so_basis(2)), la.identity(2)).summands
    assert identify_k3_group(s).as_dict()["group"] == "U"
    (s,) = isotypic_decompose(product_sl2(1), DET_GRAM).summands
    with pytest.raises(DimensionShortfall):
        identify_k3_group(s, strict=True)


@pytest.mark.parametrize("which,full,dim", [("full", True, 16), ("diagonal", False, 32), ("cartan", False, 128)])
def test_fullness(which, full, dim):
    res = product_sl2_fullness(product_sl2(2, which), 2)
    assert res.full == full and res.commutant_dim == dim


def test_fullness_single_factor():
    assert product_sl2_fullness(product_sl2(1), 1).full


@pytest.mark.parametrize("base,rank,dim", [(Q, 1, 4), (Q, 2, 8), (NumberField([-2, 0, 1], "r"), 1, 16)])
def test_doubling(base, rank, dim):
    U = QuadSpace(base, [[base(int(i == j)) for j in range(rank)] for i in range(rank)])
    rep = doubling_check(U)
    assert rep.iso_found and rep.lhs_dim == rep.rhs_dim == dim


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_decomposition_reassembles(seed):
    # so(2) + so(3) on Q^2 + Q^3 + Q^1, permuted randomly
    rng = random.Random(seed)
    gens = [la.block_diag(X, la.zeros(4, 4)) for X in so_basis(2)] + \
           [la.block_diag(la.zeros(2, 2), X, la.zeros(1, 1)) for X in so_basis(3)]
    perm = list(range(6))
    rng.shuffle(perm)
    P = [[Fraction(int(perm[j] == i)) for j in range(6)] for i in range(6)]
    Pi = la.transpose(P)
    rep = LieAlgebraRep([la.matmul(la.matmul(Pi, X), P) for X in gens])
    d = isotypic_decompose(rep, la.identity(6))
    assert sorted(s.label for s in d.summands) == ["first_kind", "invariants", "second_kind"]
    assert la.rank([v for s in d.summands for v in s.basis]) == 6
    for s in d.summands:
        B = la.transpose(s.basis)
        assert la.det(la.matmul(la.transpose(B), B)) != 0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_grading_dims_sum(seed):
    rng = random.Random(seed)
    while True:
        P = [[Fraction(rng.randint(-2, 2)) for _ in range(4)] for _ in range(4)]
        if la.det(P):
            break
    w = [rng.randint(-2, 2) for _ in range(4)]
    assert sum(grading(Cocharacter(P, w), 4)["dims"].values()) == 4
