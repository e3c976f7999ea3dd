"""Command-line front end.

Every subcommand reads JSON, runs exact checks and prints a report.  Exit code
0 means every check passed, 1 a mathematical check failed, 2 bad input.
"""

import argparse
import json
import os
import sys
import time

from .errors import InputError, KswError
from .suites import SUITES, _plain, property_suite


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.checks = []
        self.result = {}
        self.error = None

    def add(self, name, ok, witness=None):
        self.checks.append({"name": name, "pass": bool(ok), "witness": {} if ok else _plain(witness or {})})

    @property
    def exit_code(self):
        if self.error is not None:
            return self.error[0]
        return 0 if all(c["pass"] for c in self.checks) else 1

    def as_dict(self, elapsed_ms=None):
        out = {"command": self.command, "inputs": self.inputs, "checks": self.checks,
               "result": _plain(self.result), "exit_code": self.exit_code}
        if self.error is not None:
            out["error"] = self.error[1]
        if elapsed_ms is not None:
            out["elapsed_ms"] = elapsed_ms
        return out


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}")


class MalformedInput(InputError):
    pass


# ---------------------------------------------------------------- commands

def cmd_transfer(args, rep):
    from .quadspace import QuadSpace, transfer

    obj = _read_json(args.space)
    rep.inputs["space"] = obj
    form = transfer(QuadSpace.from_json(obj))
    rep.result = form.to_json()
    rep.add("transfer.nondegenerate", True)


def cmd_lift(args, rep):
    from .quadspace import QForm, bilinear_lift, hermitian_lift

    obj = _read_json(args.form)
    rep.inputs["form"] = obj
    form = QForm.from_json(obj)
    if args.hermitian:
        form.hermitian = True
    if form.e_base is None:
        raise MalformedInput("form needs e_base and e_action to be lifted")
    # the lift raises NotEquivariant unless its transfer reproduces the form
    space = hermitian_lift(form) if form.hermitian else bilinear_lift(form)
    rep.result = {"space": space.to_json(),
                  "module_basis": [[str(x) for x in u] for u in space.module_basis]}
    rep.add("lift.transfer_reproduces_form", True)


def cmd_clifford(args, rep):
    from .clifford import CliffordAlgebra, clifford_relations_hold, filtration, mask_indices
    from .quadspace import QuadSpace, element_to_json

    obj = _read_json(args.space)
    rep.inputs["space"] = obj
    alg = CliffordAlgebra(QuadSpace.from_json(obj))
    if args.op == "table":
        table = []
        for s in alg.monomials:
            row = []
            for t in alg.monomials:
                c, m = alg.mono_mul(s, t)
                row.append({"coeff": element_to_json(alg.base, c), "monomial": mask_indices(m)})
            table.append(row)
        rep.result = {"dim": alg.dim, "even_dim": alg.even_dim,
                      "monomials": [mask_indices(m) for m in alg.monomials],
                      "diagonal": [element_to_json(alg.base, q) for q in alg.q], "table": table}
        rep.add("clifford.relations", clifford_relations_hold(alg))
    else:
        f = filtration(alg)
        rep.result = {"dims": f.dims, "top_quotient_dim": f.top_quotient_dim}
        rep.add("clifford.filtration_top_quotient", f.top_quotient_dim == alg.rank,
                {"dims": f.dims})
        rep.add("clifford.filtration_equivariant", all(f.equivariance))


def _module_from_json(obj):
    from .normfunctor import EModule
    from .scalars import EtaleAlgebra

    base = EtaleAlgebra.from_json(obj["base"])
    if len(base.factors) == 1:
        base = base.factors[0]
    if "action" in obj:
        return EModule(base, obj["action"], len(obj["action"][0]))
    return EModule.free(base, int(obj["rank"]))


def cmd_norm(args, rep):
    from . import linalg as la
    from .normfunctor import (descent_check, matrix_algebra, norm_algebra, norm_module,
                              norm_morphism, scalar_algebra)
    from .quadspace import factors_of
    from .scalars import rat

    obj = _read_json(args.module)
    rep.inputs["module"] = obj
    m = _module_from_json(obj)
    n = norm_module(m)
    d = n.d
    expected = 1
    for r, f in zip(m.ranks, factors_of(m.base)):
        expected *= r ** f.degree
    rep.result = {"dim": n.dim, "degree": d, "ranks": m.ranks,
                  "carrier": [list(c) for c in n.carrier]}
    rep.add("norm.dimension_law", n.dim == expected, {"dim": n.dim, "expected": expected})
    dc = descent_check(n, seed=args.seed)
    rep.result["descent"] = dc.as_dict()
    rep.add("norm.descent", dc.ok, dc.as_dict())
    if args.morphism:
        f = _read_json(args.morphism)
        rep.inputs["morphism"] = f
        M = [[rat(x) for x in row] for row in f["matrix"]]
        rep.result["morphism"] = norm_morphism(n, M)
        rep.add("norm.morphism_e_linear", True)
    if args.algebra:
        a = _read_json(args.algebra)
        rep.inputs["algebra"] = a
        kind = a.get("kind", "matrix")
        alg = scalar_algebra(m.base) if kind == "scalar" else matrix_algebra(m.base, int(a.get("size", 2)))
        na = norm_algebra(alg)
        rep.result["algebra_dim"] = na.dim
        u = na.unit
        rep.add("norm.algebra_unit", la.mat_eq(na.left_matrix(u), la.identity(na.dim)))


def cmd_rep(args, rep):
    from .quadspace import QuadSpace
    from .reptheory import (LieAlgebraRep, doubling_check, isotypic_decompose, product_sl2,
                            product_sl2_fullness)
    from .scalars import rat

    obj = _read_json(args.inp)
    rep.inputs["in"] = obj
    if args.check == "doubling":
        out = doubling_check(QuadSpace.from_json(obj["space"]), seed=args.seed)
        rep.result = out.as_dict()
        rep.add("rep.doubling_iso", out.iso_found, out.as_dict())
    elif args.check == "fullness":
        if "basis" in obj:
            h = LieAlgebraRep([[[rat(x) for x in r] for r in M] for M in obj["basis"]])
        else:
            h = product_sl2(int(obj["s"]), obj.get("which", "full"))
        res = product_sl2_fullness(h, obj.get("s"))
        rep.result = res.as_dict()
        if "expect" in obj:
            rep.add("rep.fullness_verdict", res.full == obj["expect"], res.as_dict())
        else:
            rep.add("rep.fullness_computed", True)
    else:
        h = LieAlgebraRep([[[rat(x) for x in r] for r in M] for M in obj["basis"]])
        if "form" not in obj:
            raise MalformedInput("decompose needs an invariant form")
        form = [[rat(x) for x in r] for r in obj["form"]]
        dec = isotypic_decompose(h, form, seed=args.seed)
        rep.result = {"summands": [s.describe() for s in dec.summands]}
        total = sum(len(s.basis) for s in dec.summands)
        rep.add("rep.decomposition_complete", total == h.dim, {"total": total, "dim": h.dim})


def _period(args, rep):
    from .hodge import PeriodDatum

    obj = _read_json(args.period)
    rep.inputs["period"] = obj
    try:
        return PeriodDatum.from_json(obj).validate()
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"malformed period descriptor: {exc}")


def cmd_classify(args, rep):
    from .hodge import zarhin_classify

    z = zarhin_classify(_period(args, rep), seed=args.seed)
    rep.result = z.summary()
    rep.add("classify.mt_dimension", z.mt_dim == z.predicted_dim,
            {"mt_dim": z.mt_dim, "predicted": z.predicted_dim})
    rep.add("classify.weil_operator_in_mt", z.weil_in_mt)


def cmd_half_twist(args, rep):
    from .hodge import (cm_type_from, distinguished_embedding, half_twist, half_twist_ambient,
                        select_cm_type)

    p = _period(args, rep)
    if p.e_structure is None:
        raise MalformedInput("period has no E-structure")
    amb = half_twist_ambient(p)
    E = p.e_structure.field
    if args.cm:
        cm_obj = _read_json(args.cm)
        rep.inputs["cm"] = cm_obj
        tau = int(cm_obj.get("tau", distinguished_embedding(p, amb)))
        cm = cm_type_from(E, cm_obj["phi"], tau, amb) if "phi" in cm_obj else select_cm_type(E, tau, amb)
    else:
        cm = select_cm_type(E, distinguished_embedding(p, amb), amb)
    ht = half_twist(p, cm)
    rep.result = {**ht.summary(), "cm_type": cm.summary(), "polarization": ht.psi}
    rep.add("half_twist.pure", ht.pure)
    rep.add("half_twist.h10_half", len(ht.h10) == p.n // 2, {"h10": len(ht.h10)})
    rep.add("half_twist.polarization_alternating", ht.polarization_alternating)


def cmd_ks(args, rep):
    from .kugasatake import ks_double, kuga_satake, verify_u

    p = _period(args, rep)
    k = kuga_satake(p)
    rep.result = {"kuga_satake": k.summary()}
    rep.add("ks.j_squared", k.j_square_ok)
    rep.add("ks.commutes_with_d", k.commutes_with_d)
    rep.add("ks.balanced_eigenspaces", len(k.h10) == len(k.h01))
    if args.verify_u:
        v = verify_u(k)
        rep.result["verify_u"] = v.summary()
        rep.add("ks.verify_u", v.ok, v.summary())
    if args.double:
        d = ks_double(p, seed=args.seed)
        rep.result["double"] = d
        rep.add("ks.double", d["ok"], d)


def cmd_so4(args, rep):
    from .quadspace import QuadSpace
    from .so4quat import cspin4_check, delta_algebras, epsilon_check, nrd_checks, split_so4

    obj = _read_json(args.space)
    rep.inputs["space"] = obj
    m = split_so4(QuadSpace.from_json(obj))
    rep.result = {"split": m.summary()}
    rep.add("so4.split", m.commute and m.so_dim == 6)
    if args.check in ("delta", "cspin", "epsilon"):
        D1, D2 = delta_algebras(m)
        rep.result["delta"] = [D1.summary(), D2.summary()]
        rep.add("so4.nrd_multiplicative", nrd_checks(D1, 50, args.seed) and nrd_checks(D2, 50, args.seed))
    if args.check == "cspin":
        c = cspin4_check(m)
        rep.result["cspin"] = c
        rep.add("so4.cspin", c["ok"], c)
    if args.check == "epsilon":
        e = epsilon_check(m)
        rep.result["epsilon"] = e
        rep.add("so4.epsilon", e["ok"], e)


def cmd_check(args, rep):
    rep.inputs["suite"] = args.suite
    rep.inputs["seed"] = args.seed
    for c in property_suite(args.suite, args.seed):
        rep.checks.append(c)


COMMANDS = {"transfer": cmd_transfer, "lift": cmd_lift, "clifford": cmd_clifford, "norm": cmd_norm,
            "rep": cmd_rep, "classify": cmd_classify, "half-twist": cmd_half_twist, "ks": cmd_ks,
            "so4": cmd_so4, "check": cmd_check}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="include elapsed_ms in the report")
    parser = argparse.ArgumentParser(prog="ksw", description="Exact checks for K3-type Hodge "
                                     "structures, Clifford algebras and norm functors.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("transfer", parents=[common])
    p.add_argument("--space", required=True)
    p = sub.add_parser("lift", parents=[common])
    p.add_argument("--form", required=True)
    p.add_argument("--hermitian", action="store_true")
    p = sub.add_parser("clifford", parents=[common])
    p.add_argument("--space", required=True)
    p.add_argument("--op", choices=("table", "filtration"), default="table")
    p = sub.add_parser("norm", parents=[common])
    p.add_argument("--module", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--morphism")
    g.add_argument("--algebra")
    p = sub.add_parser("rep", parents=[common])
    p.add_argument("--check", choices=("doubling", "fullness", "decompose"), required=True)
    p.add_argument("--in", dest="inp", required=True)
    p = sub.add_parser("classify", parents=[common])
    p.add_argument("--period", required=True)
    p = sub.add_parser("half-twist", parents=[common])
    p.add_argument("--period", required=True)
    p.add_argument("--cm")
    p = sub.add_parser("ks", parents=[common])
    p.add_argument("--period", required=True)
    p.add_argument("--verify-u", action="store_true")
    p.add_argument("--double", action="store_true")
    p = sub.add_parser("so4", parents=[common])
    p.add_argument("--space", required=True)
    p.add_argument("--check", choices=("split", "delta", "cspin", "epsilon"), default="split")
    p = sub.add_parser("check", parents=[common])
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    return parser


def _text(d):
    lines = [f"{d['command']}: exit {d['exit_code']}"]
    if "error" in d:
        lines.append(f"  error {d['error']['type']}: {d['error']['message']}")
    for c in d["checks"]:
        lines.append(f"  [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}")
    if "elapsed_ms" in d:
        lines.append(f"  elapsed {d['elapsed_ms']} ms")
    return "\n".join(lines)


def run(argv=None, out=None):
    """Run the CLI; returns (exit code, report dict or None)."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    if args.seed is None:
        args.seed = int(os.environ.get("KSW_SEED", "0"))
    rep = Report(args.command, {})
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, rep)
    except KswError as exc:
        rep.error = (exc.exit_code, {"type": type(exc).__name__, "message": str(exc),
                            "witness": _plain(exc.witness)})
        rep.add(f"{args.command}.completed", False, {"error": type(exc).__name__, **exc.witness})
    elapsed = round((time.perf_counter() - start) * 1000) if args.timing else None
    d = rep.as_dict(elapsed)
    if args.format == "json":
        out.write(json.dumps(d, sort_keys=True, indent=2) + "\n")
    else:
        out.write(_text(d) + "\n")
    return d["exit_code"], d


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
