import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.errors import InputError, UnsupportedSize
from ksw.hodge import PeriodDatum
from ksw.kugasatake import grading_is_additive, ks_double, kuga_satake, verify_u
from ksw.quadspace import QuadSpace
from ksw.scalars import NumberField, rationals, real_embeddings
from ksw.suites import load_corpus

Q = rationals()

# left multiplication by e1 e2 on (1, e1e2, e1e3, e2e3) when e1^2 = e2^2 = 1, e3^2 = -1
HAND_J = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]


def rational(M):
    return [[x.to_rational() for x in row] for row in M]


def plane(x=(1, 0, 0), y=(0, 1, 0), gram=((1, 0, 0), (0, 1, 0), (0, 0, -1))):
    return PeriodDatum([list(r) for r in gram], Q, real_embeddings(Q)[0], list(x), list(y))


@pytest.fixture(scope="module")
def rank3():
    return kuga_satake(plane())


def test_rank3_matches_hand_computation(rank3):
    assert rational(rank3.J) == HAND_J
    assert rank3.dim == 4 and rank3.j_square_ok
    assert len(rank3.h10) == len(rank3.h01) == 2
    assert rank3.commutes_with_d and rank3.routes_agree


def test_rank3_verify_u(rank3):
    v = verify_u(rank3)
    assert v.ok and v.algebra_iso and v.injective and v.unit_to_identity and v.intertwines
    assert v.dim_end_d == 4
    assert tuple(v.grading_even) == tuple(v.grading_end) == (1, 2, 1)
    assert grading_is_additive(rank3)


def test_scaling_gives_same_j(rank3):
    assert kuga_satake(plane((2, 0, 0), (0, 2, 0))).J == rank3.J


def test_rm_sqrt2():
    k = kuga_satake(PeriodDatum.from_json(load_corpus("period_rm_sqrt2.json")))
    assert k.dim == 16 and k.j_square_ok and k.routes_agree and k.commutes_with_d
    assert len(k.h10) == len(k.h01) == 8


@pytest.mark.slow
def test_rm_sqrt2_verify_u():
    k = kuga_satake(PeriodDatum.from_json(load_corpus("period_rm_sqrt2.json")))
    v = verify_u(k)
    assert v.ok and tuple(v.grading_even) == (4, 8, 4)


def test_ks_double():
    rep = ks_double(PeriodDatum.from_json(load_corpus("period_plane_rank2.json")))
    assert rep["ok"]
    rep1 = ks_double(QuadSpace(Q, [[1]]))
    assert rep1["ok"] and rep1["doubling"]["lhs_dim"] == 4


def test_unsupported_inputs():
    with pytest.raises(InputError):
        kuga_satake("not a datum")
    big = PeriodDatum([[int(i == j) * (1 if i < 2 else -1) for j in range(5)] for i in range(5)], Q,
                      real_embeddings(Q)[0], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0])
    with pytest.raises(UnsupportedSize):
        kuga_satake(big)


def _conjugating_matrix(A, B):
    """An invertible T with T A = B T, if the solution space has one."""
    n = len(A)
    rows = la.mat_sub(la.kron(la.transpose(A), la.identity(n)), la.kron(la.identity(n), B))
    sols = la.nullspace(rows)
    rng = random.Random(0)
    for _ in range(20):
        v = [sum(rng.randint(-3, 3) * s[k] for s in sols) for k in range(n * n)]
        T = la.unflatten(v, n, n)
        if la.det(T):
            return T
    return None


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10, deadline=None)
def test_independent_of_diagonalization(seed):
    rng = random.Random(seed)
    while True:
        P = [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
        if la.det(P):
            break
    G = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    G2 = la.matmul(la.matmul(la.transpose(P), G), P)
    Pi = la.inverse(P)
    x = [Pi[i][0] for i in range(3)]
    y = [Pi[i][1] for i in range(3)]
    k = kuga_satake(PeriodDatum(G2, Q, real_embeddings(Q)[0], x, y))
    J = rational(k.J)
    assert la.matmul(J, J) == la.mat_neg(la.identity(4))
    assert _conjugating_matrix(HAND_J, J) is not None
    assert tuple(verify_u(k).grading_even) == (1, 2, 1)


def test_sqrt2_rank1_double():
    E = NumberField([-2, 0, 1], "r")
    rep = ks_double(QuadSpace(E, [[1]]))
    assert rep["ok"] and rep["doubling"]["lhs_dim"] == 16
