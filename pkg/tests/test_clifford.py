import random

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.clifford import (CliffordAlgebra, build_clifford, clifford_relations_hold, cspin_lie,
                          filtration, multiply, quadspace_diag, rho_ad_matrix, rho_spin_matrix)
from ksw.errors import MixedParents, OddElement
from ksw.quadspace import QuadSpace, random_space
from ksw.scalars import NumberField, rationals

Q = rationals()
SQRT2 = NumberField([-2, 0, 1], "r")


def rank3():
    return CliffordAlgebra(quadspace_diag(Q, [1, 1, -1]))


def test_rank_one():
    alg = build_clifford(quadspace_diag(Q, [1]))
    e1 = alg.gen(0)
    assert alg.dim == 2 and e1 * e1 == alg.one()


def test_rank3_dims_and_bivector_square():
    alg = rank3()
    assert (alg.dim, alg.even_dim) == (8, 4)
    b = alg.gen(0) * alg.gen(1)
    assert b * b == -alg.one()


def test_defining_relation_over_sqrt2():
    alg = CliffordAlgebra(quadspace_diag(SQRT2, [SQRT2.one(), SQRT2.gen()]))
    e2 = alg.gen(1)
    assert e2 * e2 == alg.scalar(SQRT2.gen())


def test_rewriting_rules():
    alg = rank3()
    e1, e2, e3 = (alg.gen(i) for i in range(3))
    assert multiply(alg.one(), e2) == e2
    assert (e1 * e2) * e1 == -e2
    assert (e1 * e2) * (e1 * e3) == -(e2 * e3)


def test_mixed_parents():
    with pytest.raises(MixedParents):
        multiply(rank3().one(), rank3().one())


def test_rho_spin():
    alg = rank3()
    assert rho_spin_matrix(alg, alg.one()) == la.identity(4)
    M = rho_spin_matrix(alg, alg.gen(0) * alg.gen(1))
    assert la.matmul(M, M) == la.mat_neg(la.identity(4))
    with pytest.raises(OddElement):
        rho_spin_matrix(alg, alg.gen(0))


def test_rho_ad():
    alg = rank3()
    assert rho_ad_matrix(alg, alg.one()) == la.identity(4)
    g = alg.gen(0) * alg.gen(1)
    A = rho_ad_matrix(alg, g)
    cols = la.transpose(A)
    assert alg.from_vector(cols[alg.even_index[0b011]]) == g
    # conjugation mixes e1e3 and e2e3 and nothing else
    for m in (0b101, 0b110):
        img = alg.from_vector(cols[alg.even_index[m]])
        assert set(img.coeffs) <= {0b101, 0b110}
    # algebra map on basis pairs
    for s in alg.even:
        for t in alg.even:
            x, y = alg.monomial(s), alg.monomial(t)
            lhs = la.matvec(A, alg.coords(x * y))
            rhs = alg.coords(alg.from_vector(la.matvec(A, alg.coords(x)))
                             * alg.from_vector(la.matvec(A, alg.coords(y))))
            assert lhs == rhs


def test_cspin_lie_counts():
    assert cspin_lie(CliffordAlgebra(quadspace_diag(Q, [1, 2]))).e_dim == 2
    lie = cspin_lie(rank3())
    assert len(lie.degree_two) == 3 and lie.e_dim == 4


def test_filtration_dims():
    f1 = filtration(rank3())
    assert f1.dims[:2] == [1, 4] and f1.top_quotient_dim == 3
    f2 = filtration(CliffordAlgebra(quadspace_diag(Q, [1, 1, 1, 1, -1])))
    assert f2.top_quotient_dim == 5 and all(f2.equivariance)


@pytest.mark.parametrize("rank", range(1, 7))
def test_dims_and_relations_over_q(rank):
    alg = CliffordAlgebra(random_space(Q, rank, random.Random(rank)))
    assert (alg.dim, alg.even_dim) == (2 ** rank, 2 ** (rank - 1))
    assert clifford_relations_hold(alg)


@pytest.mark.parametrize("rank", range(1, 4))
def test_dims_and_relations_over_sqrt2(rank):
    alg = CliffordAlgebra(random_space(SQRT2, rank, random.Random(rank)))
    assert alg.dim == 2 ** rank and clifford_relations_hold(alg)


def _even(alg, rng):
    return alg.from_vector([rng.randint(-3, 3) for _ in range(alg.even_dim)])


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_rho_spin_multiplicative(seed):
    rng = random.Random(seed)
    alg = CliffordAlgebra(QuadSpace(Q, [[1, 1, 0], [1, 3, 0], [0, 0, -2]]))
    x, y = _even(alg, rng), _even(alg, rng)
    assert rho_spin_matrix(alg, x * y) == la.matmul(rho_spin_matrix(alg, x), rho_spin_matrix(alg, y))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_clifford_associative(seed):
    rng = random.Random(seed)
    alg = CliffordAlgebra(random_space(SQRT2, 3, rng))
    x, y, z = (alg.from_vector([rng.randint(-2, 2) for _ in range(alg.dim)], even=False) for _ in range(3))
    assert (x * y) * z == x * (y * z)


def test_cspin_ad_images_are_skew():
    alg = CliffordAlgebra(quadspace_diag(SQRT2, [SQRT2.one(), SQRT2.gen(), SQRT2(-1)]))
    lie = cspin_lie(alg)
    q = alg.q
    for A in lie.ad_images:
        n = len(A)
        for i in range(n):
            for j in range(n):
                assert (A[i][j] * q[i] + A[j][i] * q[j]).is_zero()
