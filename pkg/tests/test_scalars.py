from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ksw.errors import InputError, NonMonic, ReduciblePolynomial
from ksw.scalars import (EtaleAlgebra, NumberField, adjoin_sqrt, automorphisms, classify_field,
                         count_roots, factor_over, make_number_field, rationals, real_embeddings,
                         roots_in, sign_at, simple_extension, sturm_sequence)

SQRT2 = NumberField([-2, 0, 1], "r")
GOLDEN = NumberField([-1, -1, 1], "g")
GAUSS = NumberField([1, 0, 1], "i")
CUBIC = NumberField([-2, 0, 0, 1], "c")

small = st.integers(-6, 6)


def elements(F):
    return st.lists(small, min_size=F.degree, max_size=F.degree).map(F.element)


def test_degree_one_field_is_q():
    Q = make_number_field([0, 1])
    assert Q.degree == 1
    assert Q(3) * Q(Fraction(1, 3)) == Q.one()


def test_golden_ratio_inverse():
    g = GOLDEN.gen()
    assert g.inverse() == g - 1


def test_sqrt2_degree():
    assert make_number_field([-2, 0, 1]).degree == 2


def test_rejects_bad_polynomials():
    with pytest.raises(NonMonic):
        NumberField([1, 0, 2])
    with pytest.raises(ReduciblePolynomial):
        NumberField([-1, 0, 1])


def test_real_embeddings():
    (q,) = real_embeddings(rationals())
    assert q.lo < 0 < q.hi
    embs = real_embeddings(SQRT2)
    assert len(embs) == 2
    assert real_embeddings(GAUSS) == []


def test_sign_at():
    neg, pos = sorted(real_embeddings(SQRT2), key=lambda e: e.lo)
    r = SQRT2.gen()
    assert sign_at(pos, SQRT2.zero()) == 0
    assert sign_at(pos, r - 1) == 1
    assert sign_at(neg, r) == -1
    # sqrt2 - 1.414 is tiny but positive at the positive root
    assert sign_at(pos, r - Fraction(1414, 1000)) == 1
    assert sign_at(pos, r - Fraction(1415, 1000)) == -1


def test_classify_field():
    assert classify_field(SQRT2).kind == "totally_real"
    cm = classify_field(GAUSS)
    assert cm.kind == "cm"
    assert cm.conj(GAUSS.gen()) == -GAUSS.gen()
    assert classify_field(CUBIC).kind == "neither"
    z5 = NumberField([1, 1, 1, 1, 1], "z")
    assert classify_field(z5).kind == "cm"


def test_sturm_counts_match_embeddings():
    for F in (SQRT2, GOLDEN, GAUSS, CUBIC, NumberField([1, -3, 0, 1], "t")):
        seq = sturm_sequence(F.min_poly)
        assert count_roots(seq, Fraction(-100), Fraction(100)) == len(real_embeddings(F))


def test_factor_and_roots_over_extension():
    # x^2 - 2 splits over Q(sqrt2)
    facs = factor_over(SQRT2, [SQRT2(-2), SQRT2(0), SQRT2(1)])
    assert len(facs) == 2
    roots = roots_in(SQRT2, [SQRT2(-2), SQRT2(0), SQRT2(1)])
    assert sorted(str(r) for r in roots) == sorted(str(r) for r in (SQRT2.gen(), -SQRT2.gen()))
    assert len(automorphisms(SQRT2)) == 2


def test_simple_extension_tower():
    ext = adjoin_sqrt(SQRT2, SQRT2(3))
    assert ext.field.degree == 4
    t = ext.root
    assert t * t == ext.embed(SQRT2(3))
    r = ext.embed(SQRT2.gen())
    assert r * r == ext.field(2)
    ext2 = simple_extension(rationals(), [rationals()(1), rationals()(0), rationals()(1)])
    assert ext2.field.degree == 2


def test_etale_algebra_idempotents():
    A = EtaleAlgebra([rationals(), SQRT2])
    assert A.degree == 3
    e0, e1 = A.idempotent(0), A.idempotent(1)
    assert e0 * e1 == A.zero() and e0 + e1 == A.one()
    a = A.element([rationals()(3), SQRT2.gen()])
    assert A.norm(a) == Fraction(3) * Fraction(-2)
    assert A.trace(a) == 3


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_field_axioms(data):
    for F in (SQRT2, GOLDEN, CUBIC):
        a, b, c = (data.draw(elements(F)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).norm() == a.norm() * b.norm()
        assert (a + b).trace() == a.trace() + b.trace()
        if not a.is_zero():
            assert a * a.inverse() == F.one()
        assert a.apply(a.minimal_polynomial()).is_zero()


@given(st.lists(small, min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_embedding_signs_are_consistent(coeffs):
    a = SQRT2.element(coeffs)
    signs = [sign_at(e, a) for e in real_embeddings(SQRT2)]
    # product of signs over embeddings is the sign of the norm
    n = a.norm()
    assert signs[0] * signs[1] == (n > 0) - (n < 0)


def test_bad_interval():
    from ksw.scalars import RealEmbedding

    with pytest.raises(InputError):
        RealEmbedding(SQRT2, 2, 1)
