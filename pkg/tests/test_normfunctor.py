import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.clifford import CliffordAlgebra, quadspace_diag
from ksw.errors import NotELinear, NotFaithful
from ksw.normfunctor import (EModule, clifford_even_algebra, descent_check, e_matrix_to_q, eta_lie,
                             matrix_algebra, norm_algebra, norm_module, norm_morphism, nu,
                             scalar_algebra)
from ksw.scalars import EtaleAlgebra, NumberField, rationals

Q = rationals()
SQRT2 = NumberField([-2, 0, 1], "r")
CUBIC = NumberField([-2, 0, 0, 1], "c")
SPLIT = EtaleAlgebra([Q, SQRT2])


def test_over_q_is_identity():
    n = norm_module(EModule.free(Q, 3))
    assert n.dim == 3
    v = [Fraction(1), Fraction(-2), Fraction(5)]
    assert nu(n, v) == v


@pytest.mark.parametrize("base,rank,dim", [(SQRT2, 1, 1), (SQRT2, 2, 4), (SQRT2, 3, 9), (CUBIC, 2, 8),
                                           (SPLIT, 2, 8)])
def test_dimension_law(base, rank, dim):
    assert norm_module(EModule.free(base, rank)).dim == dim


def test_nu_of_sqrt2():
    n = norm_module(EModule.free(SQRT2, 1))
    one = SQRT2.q_coords(SQRT2.one())
    r = SQRT2.q_coords(SQRT2.gen())
    assert nu(n, [Fraction(0), Fraction(0)]) == [0]
    assert nu(n, r) == [-2 * x for x in nu(n, one)]


def test_norm_morphism_basics():
    m = EModule.free(SQRT2, 1)
    n = norm_module(m)
    assert norm_morphism(n, la.identity(2)) == [[1]]
    assert norm_morphism(n, m.act(SQRT2.gen())) == [[-2]]
    with pytest.raises(NotELinear):
        norm_morphism(n, [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(2)]])


def test_eta_lie():
    m = EModule.free(SQRT2, 2)
    n = norm_module(m)
    zero = la.zeros(4, 4)
    assert la.is_zero_matrix(eta_lie(n, zero))
    assert eta_lie(n, m.act(SQRT2.gen())) == la.zeros(4, 4)     # trace-zero scalar
    assert eta_lie(n, la.identity(4)) == la.mat_scale(la.identity(4), 2)


def test_not_faithful():
    # Q^1 with the split algebra acting through its first factor only
    m = EModule(SPLIT, [[[1]], [[0]], [[0]]], 1)
    assert m.ranks == [1, 0]
    with pytest.raises(NotFaithful):
        norm_module(m)


def test_norm_algebras():
    nq = norm_algebra(scalar_algebra(SQRT2))
    assert nq.dim == 1
    nm = norm_algebra(matrix_algebra(SQRT2, 2))
    assert nm.dim == 16
    assert la.mat_eq(nm.left_matrix(nm.unit), la.identity(16))
    alg = CliffordAlgebra(quadspace_diag(SQRT2, [SQRT2.one(), SQRT2.one(), SQRT2(-1)]))
    nc = norm_algebra(clifford_even_algebra(alg))
    assert nc.dim == 16
    assert la.mat_eq(nc.right_matrix(nc.unit), la.identity(16))


def test_descent():
    assert descent_check(norm_module(EModule.free(Q, 2))).ok
    rep = descent_check(norm_module(EModule.free(SQRT2, 2)))
    assert rep.ok
    assert rep.as_dict()["invariant_dim"] == 4


def _rand_vec(rng, n):
    return [Fraction(rng.randint(-3, 3)) for _ in range(n)]


@given(st.integers(0, 10 ** 6), st.sampled_from([SQRT2, CUBIC, SPLIT]))
@settings(max_examples=30, deadline=None)
def test_nu_law(seed, base):
    rng = random.Random(seed)
    m = EModule.free(base, 2)
    n = norm_module(m)
    e = base.random_element(rng, nonzero=True)
    v = _rand_vec(rng, m.q_dim)
    assert nu(n, la.matvec(m.act(e), v)) == [base.norm(e) * x for x in nu(n, v)]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_functoriality(seed):
    rng = random.Random(seed)
    m = EModule.free(SQRT2, 2)
    n = norm_module(m)

    def rand_map():
        X = [[SQRT2.random_element(rng) for _ in range(2)] for _ in range(2)]
        return e_matrix_to_q(SQRT2, X)

    f, g = rand_map(), rand_map()
    assert norm_morphism(n, la.matmul(f, g)) == la.matmul(norm_morphism(n, f), norm_morphism(n, g))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_norm_algebra_multiplicative_on_nu(seed):
    rng = random.Random(seed)
    A = matrix_algebra(SQRT2, 2)
    nA = norm_algebra(A)
    a, b = _rand_vec(rng, 8), _rand_vec(rng, 8)
    ab = [sum(a[i] * b[j] * A.table[i][j][k] for i in range(8) for j in range(8) if a[i] and b[j])
          for k in range(8)]
    assert nA.mul(nu(nA.carrier, a), nu(nA.carrier, b)) == nu(nA.carrier, ab)
