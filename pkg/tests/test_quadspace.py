import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksw import linalg as la
from ksw.errors import DegenerateForm, NotEquivariant
from ksw.quadspace import (QForm, QuadSpace, bilinear_lift, diagonal_entries, hermitian_lift,
                           orthogonal_basis, random_space, signature_at, transfer, unitary_generation)
from ksw.scalars import EtaleAlgebra, NumberField, rationals, real_embeddings

Q = rationals()
SQRT2 = NumberField([-2, 0, 1], "r")
SQRT5 = NumberField([-5, 0, 1], "f")
GAUSS = NumberField([1, 0, 1], "i")


def test_transfer_over_q_is_identity():
    sp = QuadSpace(Q, [[1, 2], [2, -3]])
    assert transfer(sp).gram == [[1, 2], [2, -3]]


def test_transfer_of_unit_form_over_sqrt2():
    form = transfer(QuadSpace(SQRT2, [[1]]))
    # tr(1*1) = 2, tr(r*r) = 4
    assert form.gram == [[2, 0], [0, 4]]


def test_transfer_rank3_is_block_diagonal():
    sp = QuadSpace(SQRT2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    G = transfer(sp).gram
    block = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]]
    assert G == la.block_diag(block, block, block)
    assert la.det(G) == 8 ** 3
    assert transfer(sp).dim == sp.rank * SQRT2.degree


def test_bilinear_lift_from_explicit_action():
    form = QForm([[2, 0], [0, 4]], SQRT2, [[[0, 2], [1, 0]]])
    sp = bilinear_lift(form)
    assert sp.gram == [[SQRT2.one()]]


def test_hermitian_lift_of_trace_form():
    form = QForm([[2, 0], [0, 2]], GAUSS, [[[0, -1], [1, 0]]], hermitian=True)
    sp = hermitian_lift(form)
    assert sp.kind == "hermitian" and sp.gram == [[GAUSS.one()]]


def test_non_equivariant_action_is_rejected():
    form = QForm([[2, 0], [0, 1]], GAUSS, [[[0, -1], [1, 0]]], hermitian=True)
    with pytest.raises(NotEquivariant):
        hermitian_lift(form)


def test_alternating_parity_survives():
    sp = QuadSpace(SQRT2, [[0, 1], [-1, 0]], kind="alternating")
    back = bilinear_lift(transfer(sp))
    assert back.kind == "alternating" and back.gram == sp.gram


def test_degenerate_gram():
    with pytest.raises(DegenerateForm):
        QuadSpace(Q, [[1, 1], [1, 1]])


def _is_diagonal_basis(sp):
    B = orthogonal_basis(sp)
    cols = la.transpose(B)
    n = sp.rank
    for i in range(n):
        for j in range(n):
            v = sp.form(cols[i], cols[j])
            if (i == j) == v.is_zero():
                return False
    return True


def test_orthogonal_basis_cases():
    diag = QuadSpace(Q, [[1, 0], [0, -2]])
    assert orthogonal_basis(diag) == la.identity(2)
    hyp = QuadSpace(Q, [[0, 1], [1, 0]])
    assert _is_diagonal_basis(hyp)
    d = diagonal_entries(hyp)
    assert (d[0] * d[1]).to_rational() < 0


def test_signatures():
    assert signature_at(QuadSpace(Q, [[1, 0, 0], [0, 1, 0], [0, 0, -1]]), real_embeddings(Q)[0]) == (2, 1)
    r = SQRT2.gen()
    sp = QuadSpace(SQRT2, [[1, 0, 0], [0, 1, 0], [0, 0, r - 2]])
    assert [signature_at(sp, e) for e in real_embeddings(SQRT2)] == [(2, 1), (2, 1)]
    one = QuadSpace(SQRT2, [[r - 1]])
    neg, pos = sorted(real_embeddings(SQRT2), key=lambda e: e.lo)
    assert signature_at(one, pos) == (1, 0) and signature_at(one, neg) == (0, 1)


@pytest.mark.parametrize("n,inv,span", [(1, "transpose", 1), (2, "transpose", 4), (2, "swap", 8),
                                        (2, "adjoint", 8)])
def test_unitary_generation(n, inv, span):
    rep = unitary_generation(n, inv)
    assert rep["certified"] and rep["span_rank"] == rep["target_dim"] == span


BASES = [Q, SQRT2, SQRT5, GAUSS, EtaleAlgebra([Q, SQRT2])]


@given(st.integers(0, 10 ** 6), st.sampled_from(range(len(BASES))), st.integers(1, 4),
       st.sampled_from(["symmetric", "alternating"]))
@settings(max_examples=40, deadline=None)
def test_transfer_lift_roundtrip(seed, b, rank, kind):
    if kind == "alternating" and rank % 2:
        rank += 1 if rank < 4 else -1
    base = BASES[b]
    sp = random_space(base, rank, random.Random(seed), kind)
    form = transfer(sp)
    assert form.dim == rank * base.degree
    back = bilinear_lift(form)
    assert back.gram == sp.gram and back.kind == sp.kind


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_hermitian_roundtrip(seed, rank):
    sp = random_space(GAUSS, rank, random.Random(seed), "hermitian")
    assert hermitian_lift(transfer(sp)).gram == sp.gram


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_orthogonal_basis_diagonalizes(seed, rank):
    sp = random_space(SQRT2, rank, random.Random(seed))
    assert _is_diagonal_basis(sp)


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_signature_total_invariant_under_galois(seed, rank):
    sp = random_space(SQRT2, rank, random.Random(seed))
    conj = QuadSpace(SQRT2, [[_sigma(x) for x in row] for row in sp.gram])
    total = sum(p - q for p, q in (signature_at(sp, e) for e in real_embeddings(SQRT2)))
    total_c = sum(p - q for p, q in (signature_at(conj, e) for e in real_embeddings(SQRT2)))
    assert total == total_c


def _sigma(x):
    a, b = x.c
    return SQRT2.element([a, -b])
