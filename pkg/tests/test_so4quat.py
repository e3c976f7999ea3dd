import random

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.errors import InputError, NotSplit, NotTraceless
from ksw.quadspace import QuadSpace
from ksw.scalars import NumberField, rationals
from ksw.so4quat import (DET_GRAM, cspin4_check, delta_algebras, det_space, epsilon_check, is_skew,
                         noncompact_embeddings, nrd_checks, sl2_basis, sl2pair_action, split_so4)
from ksw.suites import load_corpus

Q = rationals()
SQRT2 = NumberField([-2, 0, 1], "r")


def space(name):
    return QuadSpace.from_json(load_corpus(name))


@pytest.fixture(scope="module")
def det_model():
    m = split_so4(det_space(Q))
    delta_algebras(m)
    return m


def test_sl2pair_action():
    z = la.zeros(2, 2, Q.zero())
    assert la.is_zero_matrix(sl2pair_action(z, z))
    A = [[Q(0), Q(1)], [Q(0), Q(0)]]
    X = sl2pair_action(A, z)
    assert la.generic_rank(X, Q.one()) == 2 and is_skew(X, [[Q(v) for v in r] for r in DET_GRAM])
    imgs = [sl2pair_action(A, z) for A in sl2_basis(Q)] + [sl2pair_action(z, B) for B in sl2_basis(Q)]
    assert la.generic_rank([la.flatten(M) for M in imgs], Q.one()) == 6
    with pytest.raises(NotTraceless):
        sl2pair_action([[Q(1), Q(0)], [Q(0), Q(0)]], z)


def test_det_form_model(det_model):
    assert det_model.commute and det_model.so_dim == 6
    assert len(det_model.L1) == len(det_model.L2) == 3


def test_conjugated_model():
    m = split_so4(space("space_det_conjugated.json"))
    assert all(la.is_zero_matrix(la.commutator(X, Y)) for X in m.L1 for Y in m.L2)


def test_swap_flag_relabels():
    a = split_so4(det_space(Q))
    b = split_so4(det_space(Q), swap=True)
    assert a.L1 == b.L2 and a.L2 == b.L1


def test_anisotropic_is_not_split():
    with pytest.raises(NotSplit) as exc:
        split_so4(space("space_diag_positive.json"))
    assert exc.value.witness["signature"] == [4, 0]
    with pytest.raises(InputError):
        split_so4(QuadSpace(Q, [[1, 0], [0, -1]]))


def test_indefinite_anisotropic_over_q():
    # norm form of the division algebra (-1, 3): indefinite, square discriminant, anisotropic
    sp = QuadSpace(Q, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -3, 0], [0, 0, 0, -3]])
    with pytest.raises(NotSplit):
        split_so4(sp)


def test_unique_noncompact_embedding():
    a = SQRT2(1) - SQRT2.gen()
    sp = QuadSpace(SQRT2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, a, 0], [0, 0, 0, a]])
    assert len(noncompact_embeddings(sp)) == 1
    with pytest.raises(NotSplit):
        split_so4(sp)
    assert noncompact_embeddings(space("space_det_sqrt2.json")) == [0, 1]


def test_delta_algebras_split(det_model):
    D1, D2 = det_model.delta
    for D in (D1, D2):
        assert D.split_witness is not None and D.generator is not None
        assert nrd_checks(D, 50, 0)
        # V is generated by one vector
        v0 = D.generator
        span = [la.matvec(b, v0) for b in D.basis]
        assert la.generic_rank(span, Q.one()) == 4


def test_cspin4(det_model):
    c = cspin4_check(det_model)
    assert c["ok"] and c["cspin_dim"] == c["target_dim"] == c["rank"] == 7
    assert c["brackets_preserved"] and c["scalars_to_zero"]


def test_epsilon_over_q(det_model):
    e = epsilon_check(det_model)
    assert e["ok"] and e["dim_D"] == e["hom_dim"] == e["norm_dim"] == e["eps_rank"] == 4
    assert e["iso"] and e["d_linear"] and e["equivariant"]
    assert e["generator_image"] is not None


@pytest.mark.slow
def test_sqrt2_model():
    m = split_so4(space("space_det_sqrt2.json"))
    delta_algebras(m)
    assert cspin4_check(m)["cspin_dim"] == 14
    e = epsilon_check(m)
    assert e["ok"] and e["hom_dim"] == e["norm_dim"] == 16 and e["equivariant"]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10, deadline=None)
def test_random_conjugates_split(seed):
    rng = random.Random(seed)
    while True:
        P = [[Q(rng.randint(-2, 2)) for _ in range(4)] for _ in range(4)]
        if not la.generic_det(P, Q.one()).is_zero():
            break
    G = [[Q(v) for v in r] for r in DET_GRAM]
    G2 = la.matmul(la.matmul(la.transpose(P), G), P)
    m = split_so4(QuadSpace(Q, G2))
    assert m.commute and m.so_dim == 6
    D1, D2 = delta_algebras(m)
    assert nrd_checks(D1, 5, seed) and nrd_checks(D2, 5, seed)
