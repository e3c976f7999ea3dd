"""Seeded property suites, one per module, and the shipped corpus."""

import json
from fractions import Fraction
from importlib import resources

from . import linalg as la
from .errors import KswError

SUITES = ("scalars", "forms", "clifford", "norm", "rep", "hodge", "ks", "so4")


def corpus_path(name):
    return resources.files("ksw") / "data" / "corpus" / name


def load_corpus(name):
    with corpus_path(name).open() as fh:
        return json.load(fh)


class Suite:
    def __init__(self, name, seed):
        self.name = name
        self.seed = seed
        self.checks = []

    def check(self, name, fn):
        try:
            out = fn()
        except KswError as exc:
            out = (False, {"error": type(exc).__name__, "message": str(exc), **exc.witness})
        if isinstance(out, tuple):
            ok, witness = out
        else:
            ok, witness = bool(out), {}
        self.checks.append({"name": f"{self.name}.{name}", "pass": bool(ok),
                            "witness": {} if ok else _plain(witness)})

    def expect_error(self, name, err, fn):
        def run():
            try:
                fn()
            except err as exc:
                return True, {"error": type(exc).__name__}
            return False, {"expected": err.__name__}

        self.check(name, run)


def _plain(obj):
    """JSON-safe copy: Fractions and field elements as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return str(obj)


# ---------------------------------------------------------------- suites

def _scalars(s):
    from .scalars import (NumberField, classify_field, count_roots, seeded, sturm_sequence)

    rng = seeded(s.seed)
    fields = [NumberField([-2, 0, 1], "r"), NumberField([-2, 0, 0, 1], "c"), NumberField([1, 0, 1], "i"),
              NumberField([-1, -1, 1], "g")]

    def field_laws():
        for F in fields:
            for _ in range(10):
                a, b, c = (F.random_element(rng, nonzero=True) for _ in range(3))
                if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c:
                    return False, {"field": F.min_poly}
                if a * a.inverse() != F.one():
                    return False, {"inverse": str(a)}
                if (a * b).norm() != a.norm() * b.norm() or (a + b).trace() != a.trace() + b.trace():
                    return False, {"norm_or_trace": str(a)}
                mp = a.minimal_polynomial()
                if not a.apply(mp).is_zero():
                    return False, {"minimal_polynomial": str(a)}
        return True

    s.check("field_laws", field_laws)

    def sturm():
        for F in fields:
            seq = sturm_sequence(F.min_poly)
            n = count_roots(seq, Fraction(-100), Fraction(100))
            if n != len(F.real_embeddings):
                return False, {"field": F.min_poly, "sturm": n}
        return True

    s.check("sturm_counts", sturm)
    s.check("classification", lambda: [classify_field(F).kind for F in fields]
            == ["totally_real", "neither", "cm", "totally_real"])


def _forms(s):
    from .quadspace import bilinear_lift, hermitian_lift, random_space, transfer, unitary_generation
    from .scalars import EtaleAlgebra, NumberField, rationals, seeded

    rng = seeded(s.seed)
    Q = rationals()
    bases = [Q, NumberField([-2, 0, 1], "r"), NumberField([-5, 0, 1], "f"),
             EtaleAlgebra([Q, NumberField([-2, 0, 1], "r")])]

    def roundtrip():
        for base in bases:
            for rank in (1, 2, 3):
                for kind in ("symmetric", "alternating"):
                    if kind == "alternating" and rank % 2:
                        continue
                    sp = random_space(base, rank, rng, kind)
                    back = bilinear_lift(transfer(sp))
                    if back.gram != sp.gram or back.kind != sp.kind:
                        return False, {"base": repr(base), "rank": rank, "kind": kind}
        return True

    s.check("transfer_lift_roundtrip", roundtrip)

    def hermitian():
        E = NumberField([1, 0, 1], "i")
        for rank in (1, 2, 3):
            sp = random_space(E, rank, rng, "hermitian")
            if hermitian_lift(transfer(sp)).gram != sp.gram:
                return False, {"rank": rank}
        return True

    s.check("hermitian_roundtrip", hermitian)
    for n in (1, 2, 3):
        for inv in ("transpose", "adjoint", "swap"):
            s.check(f"unitary_generation.{inv}.{n}",
                    lambda n=n, inv=inv: unitary_generation(n, inv)["certified"])


def _clifford(s):
    from .clifford import CliffordAlgebra, clifford_relations_hold, filtration, quadspace_diag
    from .scalars import NumberField, rationals, seeded

    rng = seeded(s.seed)
    Q = rationals()
    E = NumberField([-2, 0, 1], "r")

    def dims_and_relations():
        for base, top in ((Q, 6), (E, 3)):
            for rank in range(1, top + 1):
                entries = [base(rng.choice([1, -1, 2, 3])) for _ in range(rank)]
                if base is E:
                    entries[-1] = E.gen()
                alg = CliffordAlgebra(quadspace_diag(base, entries))
                if alg.dim != 2 ** rank or alg.even_dim != 2 ** (rank - 1):
                    return False, {"rank": rank}
                if not clifford_relations_hold(alg):
                    return False, {"relations": rank}
        return True

    s.check("dims_and_relations", dims_and_relations)

    def filt():
        for m in (1, 2):
            alg = CliffordAlgebra(quadspace_diag(Q, [1] * (2 * m) + [-1]))
            f = filtration(alg)
            if f.top_quotient_dim != 2 * m + 1 or not all(f.equivariance):
                return False, {"m": m, "dims": f.dims}
        return True

    s.check("filtration_top_quotient", filt)


def _norm(s):
    from .normfunctor import EModule, descent_check, norm_module, nu
    from .scalars import EtaleAlgebra, NumberField, rationals, seeded

    rng = seeded(s.seed)
    Q = rationals()
    bases = [NumberField([-2, 0, 1], "r"), NumberField([-2, 0, 0, 1], "c"),
             EtaleAlgebra([Q, NumberField([-2, 0, 1], "r")])]
    for base in bases:
        d = base.degree if hasattr(base, "degree") else sum(f.degree for f in base.factors)
        for rank in (1, 2):
            if d == 3 and rank == 2:
                continue

            def run(base=base, rank=rank, d=d):
                m = EModule.free(base, rank)
                n = norm_module(m)
                if n.dim != rank ** d:
                    return False, {"dim": n.dim}
                for _ in range(5):
                    e = base.random_element(rng, nonzero=True)
                    v = [Fraction(rng.randint(-3, 3)) for _ in range(m.q_dim)]
                    lhs = nu(n, la.matvec(m.act(e), v))
                    rhs = [base.norm(e) * x for x in nu(n, v)]
                    if lhs != rhs:
                        return False, {"element": str(e)}
                rep = descent_check(n, samples=2, seed=s.seed)
                return rep.ok, rep.as_dict()

            s.check(f"law_and_descent.{d}.{rank}.{len(getattr(base, 'factors', [base]))}", run)


def _rep(s):
    from .quadspace import QuadSpace
    from .reptheory import doubling_check, product_sl2, product_sl2_fullness
    from .scalars import NumberField, rationals

    Q = rationals()
    verdicts = {"full": True, "diagonal": False, "cartan": False}
    for which, want in verdicts.items():
        s.check(f"fullness.{which}", lambda which=which, want=want:
                product_sl2_fullness(product_sl2(2, which), 2).full == want)
    E = NumberField([-2, 0, 1], "r")
    for base, rank in ((Q, 1), (Q, 2), (E, 1)):
        def run(base=base, rank=rank):
            U = QuadSpace(base, [[base(int(i == j)) for j in range(rank)] for i in range(rank)])
            rep = doubling_check(U, seed=s.seed)
            return rep.iso_found, rep.as_dict()

        s.check(f"doubling.{base.degree}.{rank}", run)


def _hodge(s):
    from .errors import IsotropyViolated, TauInPhi
    from .hodge import (PeriodDatum, cm_type_from, distinguished_embedding, half_twist,
                        half_twist_ambient, norm_hodge_numbers, select_cm_type, zarhin_classify)
    from .scalars import NumberField

    want = {"period_sqrt2_sqrt3.json": ("totally_real", 1, 3),
            "period_rational_plane.json": ("cm", 2, 1),
            "period_rm_sqrt2.json": ("totally_real", 2, 6)}
    for name, (kind, deg, mt) in want.items():
        def run(name=name, kind=kind, deg=deg, mt=mt):
            z = zarhin_classify(PeriodDatum.from_json(load_corpus(name)), seed=s.seed)
            got = (z.kind, z.e_field.degree, z.mt_dim)
            return got == (kind, deg, mt) and z.weil_in_mt, {"got": list(got)}

        s.check(f"zarhin.{name[:-5]}", run)
    s.check("norm_hodge_numbers", lambda: norm_hodge_numbers(
        [{(1, -1): 1, (0, 0): 1, (-1, 1): 1}, {(0, 0): 3}]) == {(-1, 1): 3, (0, 0): 3, (1, -1): 3})
    s.check("primitive_cm_type", lambda: select_cm_type(NumberField([1, 1, 1, 1, 1], "z"), 0).primitive)

    def twist():
        p = PeriodDatum.from_json(load_corpus("period_qi.json"))
        amb = half_twist_ambient(p)
        tau = distinguished_embedding(p, amb)
        ht = half_twist(p, select_cm_type(p.e_structure.field, tau, amb))
        return ht.pure and len(ht.h10) == p.n // 2, ht.summary()

    s.check("half_twist", twist)

    def tau_in_phi():
        p = PeriodDatum.from_json(load_corpus("period_qi.json"))
        amb = half_twist_ambient(p)
        tau = distinguished_embedding(p, amb)
        half_twist(p, cm_type_from(p.e_structure.field, [tau], tau, amb))

    s.expect_error("tau_in_phi", TauInPhi, tau_in_phi)
    s.expect_error("isotropy_violation", IsotropyViolated,
                   lambda: PeriodDatum.from_json(load_corpus("invalid/period_bad_isotropy.json")).validate())


def _ks(s):
    from .hodge import PeriodDatum
    from .kugasatake import grading_is_additive, ks_double, kuga_satake, verify_u

    def rank3():
        k = kuga_satake(PeriodDatum.from_json(load_corpus("period_rational_plane.json")))
        v = verify_u(k)
        ok = (k.dim == 4 and len(k.h10) == len(k.h01) == 2 and v.ok
              and v.grading_even == (1, 2, 1) and grading_is_additive(k))
        return ok, {**k.summary(), **v.summary()}

    s.check("rank3_end_to_end", rank3)

    def scaled():
        p = load_corpus("period_rational_plane.json")
        k1 = kuga_satake(PeriodDatum.from_json(p))
        p2 = dict(p, x=[["2"], ["0"], ["0"]], y=[["0"], ["2"], ["0"]])
        k2 = kuga_satake(PeriodDatum.from_json(p2))
        return k1.J == k2.J

    s.check("scaling_invariance", scaled)

    def rm():
        k = kuga_satake(PeriodDatum.from_json(load_corpus("period_rm_sqrt2.json")))
        return k.j_square_ok and k.dim == 16 and k.routes_agree, k.summary()

    s.check("rm_sqrt2_complex_structure", rm)

    def double():
        rep = ks_double(PeriodDatum.from_json(load_corpus("period_plane_rank2.json")), seed=s.seed)
        return rep["ok"], rep

    s.check("double_rank2", double)


def _so4(s):
    from .errors import NotSplit
    from .quadspace import QuadSpace
    from .so4quat import cspin4_check, delta_algebras, epsilon_check, nrd_checks, split_so4

    for name in ("space_det_form.json", "space_det_conjugated.json"):
        def run(name=name):
            m = split_so4(QuadSpace.from_json(load_corpus(name)))
            D1, D2 = delta_algebras(m)
            ok = nrd_checks(D1, 20, s.seed) and nrd_checks(D2, 20, s.seed)
            c = cspin4_check(m)
            e = epsilon_check(m)
            return ok and c["ok"] and e["ok"], {"cspin": c, "epsilon": e}

        s.check(f"model.{name[:-5]}", run)
    s.expect_error("anisotropic", NotSplit,
                   lambda: split_so4(QuadSpace.from_json(load_corpus("space_diag_positive.json"))))


_RUNNERS = {"scalars": _scalars, "forms": _forms, "clifford": _clifford, "norm": _norm,
            "rep": _rep, "hodge": _hodge, "ks": _ks, "so4": _so4}


def property_suite(name, seed=0):
    """Checks of the named suite (or all), in canonical order."""
    if name != "all" and name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}")
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        s = Suite(n, seed)
        _RUNNERS[n](s)
        checks.extend(s.checks)
    return checks
