"""The ten acceptance criteria, each under its runtime cap.

Run alone with ``pytest tests/test_acceptance.py``; one PASS/FAIL line per criterion is
printed at the end of the session.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from ksw import linalg as la
from ksw.clifford import CliffordAlgebra, clifford_relations_hold, filtration, quadspace_diag
from ksw.errors import TauInPhi
from ksw.hodge import (PeriodDatum, cm_type_from, distinguished_embedding, endomorphism_algebra,
                       half_twist, half_twist_ambient, norm_hodge_numbers, select_cm_type,
                       zarhin_classify)
from ksw.kugasatake import kuga_satake, verify_u
from ksw.normfunctor import EModule, descent_check, norm_module, nu
from ksw.quadspace import (QuadSpace, bilinear_lift, hermitian_lift, random_space, transfer,
                           unitary_generation)
from ksw.reptheory import doubling_check, product_sl2, product_sl2_fullness
from ksw.scalars import NumberField, rationals
from ksw.so4quat import cspin4_check, delta_algebras, epsilon_check, split_so4
from ksw.suites import load_corpus

Q = rationals()
SQRT2 = NumberField([-2, 0, 1], "r")
SQRT5 = NumberField([-5, 0, 1], "f")
GAUSS = NumberField([1, 0, 1], "i")
CUBIC = NumberField([-2, 0, 0, 1], "c")


class Timer:
    def __init__(self, cap):
        self.cap = cap

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.cap, f"took {self.elapsed:.1f} s, cap {self.cap} s"


def corpus(name):
    return PeriodDatum.from_json(load_corpus(name))


@pytest.mark.criterion(1, "transfer/lift roundtrip")
def test_transfer_lift_roundtrip():
    with Timer(5):
        rng = random.Random(0)
        samples = 0
        for base in (Q, SQRT2, SQRT5, GAUSS):
            for rank in (1, 2, 3, 4):
                kinds = ["symmetric"] + (["alternating"] if rank % 2 == 0 else [])
                for kind in kinds:
                    sp = random_space(base, rank, rng, kind)
                    form = transfer(sp)
                    back = bilinear_lift(form)
                    assert back.gram == sp.gram
                    # parity is inherited: symmetric stays symmetric, alternating stays alternating
                    assert back.kind == ("symmetric" if form.symmetric else "alternating") == kind
                    samples += 1
                if base is GAUSS:
                    sp = random_space(base, rank, rng, "hermitian")
                    assert hermitian_lift(transfer(sp)).gram == sp.gram
                    samples += 1
        assert samples >= 20


@pytest.mark.criterion(2, "norm dimension law, nu-law, descent")
def test_norm_dimension_law():
    with Timer(60):
        rng = random.Random(0)
        for base in (Q, SQRT2, CUBIC):
            d = base.degree
            for rank in (1, 2, 3):
                m = EModule.free(base, rank)
                n = norm_module(m)
                assert n.dim == rank ** d
                for _ in range(50):
                    e = base.random_element(rng, nonzero=True)
                    v = [Fraction(rng.randint(-3, 3)) for _ in range(m.q_dim)]
                    assert nu(n, la.matvec(m.act(e), v)) == [base.norm(e) * x for x in nu(n, v)]
                rep = descent_check(n, samples=2, seed=0)
                assert rep.ok and rep.invariant_dim == n.dim


def _brute_force(tables):
    out = {}
    for choice in itertools.product(*[list(t.items()) for t in tables]):
        key = (sum(pq[0] for pq, _ in choice), sum(pq[1] for pq, _ in choice))
        mult = 1
        for _, m in choice:
            mult *= m
        out[key] = out.get(key, 0) + mult
    return out


@pytest.mark.criterion(3, "norm Hodge numbers")
def test_norm_hodge_numbers():
    with Timer(1):
        # sigma0 carries K3-type numbers, the other embedding is pure (0,0) of the same total
        h = [{(1, -1): 1, (0, 0): 1, (-1, 1): 1}, {(0, 0): 3}]
        got = norm_hodge_numbers(h, SQRT2)
        assert got == _brute_force(h)
        assert got == {(-1, 1): 3, (0, 0): 3, (1, -1): 3}
        assert sum(got.values()) == 9


@pytest.mark.criterion(4, "Clifford layer")
def test_clifford_layer():
    with Timer(30):
        rng = random.Random(0)
        for base, top in ((Q, 6), (SQRT2, 3)):
            for rank in range(1, top + 1):
                alg = CliffordAlgebra(random_space(base, rank, rng))
                assert (alg.dim, alg.even_dim) == (2 ** rank, 2 ** (rank - 1))
                assert clifford_relations_hold(alg)
        for m in (1, 2):
            f = filtration(CliffordAlgebra(quadspace_diag(Q, [1] * (2 * m) + [-1])))
            assert f.top_quotient_dim == 2 * m + 1
            assert la.rank(la.to_rational_matrix(f.top_iso)) == 2 * m + 1
            assert all(f.equivariance)


@pytest.mark.criterion(5, "Kuga-Satake core")
def test_kuga_satake_core():
    with Timer(120):
        k = kuga_satake(corpus("period_rational_plane.json"))
        J = [[x.to_rational() for x in row] for row in k.J]
        assert la.matmul(J, J) == la.mat_neg(la.identity(4))
        assert len(k.h10) == len(k.h01) == 2
        v = verify_u(k)
        assert v.ok and v.algebra_iso and v.dim_end_d == 4
        assert tuple(v.grading_even) == tuple(v.grading_end) == (1, 2, 1)
        rm = kuga_satake(corpus("period_rm_sqrt2.json"))
        assert rm.dim == 16 and rm.j_square_ok
        g = tuple(verify_u(rm).grading_even)
        assert sum(g) == 16 and g == g[::-1]


@pytest.mark.criterion(6, "doubling identity")
def test_doubling_identity():
    with Timer(60):
        for base, rank, dim in ((Q, 1, 4), (Q, 2, 8), (SQRT2, 1, 16)):
            U = QuadSpace(base, [[base(int(i == j)) for j in range(rank)] for i in range(rank)])
            rep = doubling_check(U)
            assert rep.iso_found and rep.lhs_dim == rep.rhs_dim == dim
            assert rep.copies == 2 ** base.degree


@pytest.mark.criterion(7, "Zarhin classifier")
def test_zarhin_classifier():
    with Timer(30):
        p = corpus("period_sqrt2_sqrt3.json")
        z = zarhin_classify(p)
        assert len(endomorphism_algebra(p)) == 1 and z.e_field.degree == 1
        assert (z.kind, z.mt_dim, len(z.v_alg)) == ("totally_real", 3, 0)
        z = zarhin_classify(corpus("period_rational_plane.json"))
        assert (len(z.v_trans), z.kind, z.e_field.degree, z.mt_dim) == (2, "cm", 2, 1)
        a, b, _ = z.e_field.min_poly
        assert b * b - 4 * a < 0
        z = zarhin_classify(corpus("period_rm_sqrt2.json"))
        assert (z.kind, z.e_field.degree, z.mt_dim) == ("totally_real", 2, 6)


@pytest.mark.criterion(8, "half-twist")
def test_half_twist():
    with Timer(5):
        p = corpus("period_qi.json")
        amb = half_twist_ambient(p)
        tau = distinguished_embedding(p, amb)
        ht = half_twist(p, select_cm_type(p.e_structure.field, tau, amb))
        assert ht.pure and len(ht.h10) == len(ht.h01) == p.n // 2
        with pytest.raises(TauInPhi):
            half_twist(p, cm_type_from(p.e_structure.field, [tau], tau, amb))


@pytest.mark.criterion(9, "SO4 / quaternion layer")
def test_so4_layer():
    with Timer(120):
        for name, dim in (("space_det_conjugated.json", 4), ("space_det_sqrt2.json", 16)):
            m = split_so4(QuadSpace.from_json(load_corpus(name)))
            assert m.commute and len(m.L1) == len(m.L2) == 3 and m.so_dim == 6
            D1, D2 = delta_algebras(m)
            assert D1.generator is not None and D2.generator is not None
            c = cspin4_check(m)
            d = m.base.degree
            assert c["ok"] and c["cspin_dim"] == c["target_dim"] == 7 * d and c["brackets_preserved"]
            e = epsilon_check(m)
            assert e["ok"] and e["hom_dim"] == e["norm_dim"] == e["eps_rank"] == dim
            assert e["equivariant"] and e["d_linear"]


@pytest.mark.criterion(10, "product-sl2 fullness and unitary generation")
def test_fullness_and_unitary_generation():
    with Timer(30):
        for which, full, dim in (("full", True, 16), ("diagonal", False, 32), ("cartan", False, 128)):
            res = product_sl2_fullness(product_sl2(2, which), 2)
            assert res.full == full and res.commutant_dim == dim
        for n, inv, span in ((1, "transpose", 1), (2, "transpose", 4), (2, "swap", 8)):
            rep = unitary_generation(n, inv)
            assert rep["certified"] and rep["span_rank"] == span


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
