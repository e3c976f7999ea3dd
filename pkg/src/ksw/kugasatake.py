"""Kuga-Satake complex structures on even Clifford algebras, with real multiplication.

H = N_{E/Q}(C+(V, phi~)) and D is the same algebra acting on the right.  For
E = Q the norm functor is the identity and J is left multiplication by
x y / phi(x, x).  For E != Q the generator g = x y / phi(x, x) + (1 - e0) lives
in C+ (x)_Q F, with e0 the idempotent of E (x) F cut out by sigma0, and J is
N(left multiplication by g): the sigma0-factor carries J, the others act
trivially.
"""

from fractions import Fraction

from . import linalg as la
from .clifford import CliffordAlgebra
from .errors import InputError, UnsupportedSize, VerificationFailed
from .hodge import PeriodDatum, gaussian_closure
from .normfunctor import (clifford_even_algebra, eta_lie, norm_algebra, norm_module,
                          norm_morphism, nu)
from .quadspace import QForm, QuadSpace, bilinear_lift
from .scalars import BaseChange, rationals


class KugaSatakeDatum:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def summary(self):
        return {"e_degree": self.e_field.degree, "rank": self.space.rank,
                "even_dim": self.dim, "j_squared_minus_one": self.j_square_ok,
                "h10": len(self.h10), "h01": len(self.h01),
                "commutes_with_d": self.commutes_with_d, "routes_agree": self.routes_agree}


def _e_space(p):
    """The E-quadratic space of a datum and, for each Q-basis vector, its E-coordinates."""
    es = p.e_structure
    if es is None or es.field.degree == 1:
        Q = rationals()
        space = QuadSpace(Q, [[Q(v) for v in row] for row in p.gram])
        coords = [[Q(int(i == a)) for i in range(p.n)] for a in range(p.n)]
        return Q, space, coords, None
    E = es.field
    if es.sigma0 is None:
        raise InputError("E != Q needs sigma0")
    space = bilinear_lift(QForm(p.gram, E, es.action))
    us = space.module_basis
    basis = E.q_basis()
    d = E.degree
    cols = []
    for u in us:
        for b in basis:
            cols.append(la.matvec(es.act(b, p.n), u))
    Tinv = la.inverse(la.transpose(cols))
    coords = []
    for a in range(p.n):
        col = [Tinv[r][a] for r in range(p.n)]
        coords.append([sum((col[k * d + l] * basis[l] for l in range(d)), E.zero())
                       for k in range(len(us))])
    return E, space, coords, p.field(es.sigma0)


def _left_q(alg, x):
    """Rational matrix of left multiplication by an even element on the Q-basis of C+."""
    M = alg.left_matrix(x)
    return la.restrict_matrix(M, alg.base.mult_matrix)


def _right_q(alg, x):
    M = alg.right_matrix(x)
    return la.restrict_matrix(M, alg.base.mult_matrix)


def _combine(F, terms, size):
    out = [[F.zero()] * size for _ in range(size)]
    for c, M in terms:
        if c.is_zero():
            continue
        for i in range(size):
            row = M[i]
            for j in range(size):
                if row[j]:
                    out[i][j] = out[i][j] + c * row[j]
    return out


def kuga_satake(p):
    if not isinstance(p, PeriodDatum):
        raise InputError("kuga_satake needs a period datum")
    p.validate()
    E, space, coords, t = _e_space(p)
    d = E.degree
    if d > 2 or space.rank > 4:
        raise UnsupportedSize("desk scale is [E:Q] <= 2 and rank <= 4",
                              {"e_degree": d, "rank": space.rank})
    alg = CliffordAlgebra(space)
    F = p.field
    vecs = [alg.vector(c) for c in coords]
    size = alg.even_dim * d
    # left multiplication by x y on C+ (x)_Q F
    terms = []
    for a in range(p.n):
        if p.x[a].is_zero():
            continue
        for b in range(p.n):
            if p.y[b].is_zero():
                continue
            terms.append((p.x[a] * p.y[b], _left_q(alg, alg.multiply(vecs[a], vecs[b]))))
    c = p.phi(p.x, p.x)
    Lxy = _combine(F, [(k / c, M) for k, M in terms], size)
    ea = clifford_even_algebra(alg)
    mod = ea.module
    if d > 1:
        eps = BaseChange(E, F.one()).idempotent(t)
        powers = [E.element([0] * l + [1]) for l in range(d)]
        rest = [(-h, mod.act(pw)) for h, pw in zip(eps.c, powers)]
        Lg = la.mat_add(Lxy, _combine(F, [(F.one(), la.identity(size))] + rest, size))
    else:
        Lg = Lxy
    nmod = norm_module(mod)
    D = norm_algebra(ea)
    J = norm_morphism(nmod, Lg, check=False)
    dim = nmod.dim
    I = la.identity(dim, F.one())
    minus_I = [[-v for v in row] for row in I]
    J2 = la.matmul(J, J)
    j_square_ok = J2 == minus_I
    if not j_square_ok:
        raise VerificationFailed("J^2 != -I")
    # second route: left multiplication by nu(g) in N(C+) (x) F
    g_vec = la.matvec(Lg, ea.unit)
    J_alt = D.left_matrix(nu(nmod, g_vec))
    # third route: derivative of N at the sigma0 factor
    J_eta = eta_lie(nmod, Lxy)
    routes_agree = J_alt == J and J_eta == J
    if not routes_agree:
        raise VerificationFailed("norm routes for J disagree")
    basis = [[Fraction(int(k == j)) for k in range(dim)] for j in range(dim)]
    d_action = [D.right_matrix(b) for b in basis]
    commutes = all(la.matmul(J, R) == la.matmul(R, J) for R in d_action)
    if not commutes:
        raise VerificationFailed("J does not commute with the right D-action")
    C = gaussian_closure(F)
    K = C.K
    JK = [[C.embed(v) for v in row] for row in J]
    def shifted(lam):
        return [[JK[i][j] + (lam if i == j else K.zero()) for j in range(dim)] for i in range(dim)]

    h10 = la.kernel_over(shifted(C.i), K)         # J v = -i v
    h01 = la.kernel_over(shifted(-C.i), K)
    if len(h10) != len(h01) or len(h10) + len(h01) != dim:
        raise VerificationFailed("eigenspaces of J are unbalanced",
                                 {"h10": len(h10), "h01": len(h01)})
    j_elem = la.matvec(J, D.unit)
    return KugaSatakeDatum(period=p, e_field=E, space=space, clifford=alg, even_algebra=D,
                           norm=nmod, dim=dim, J=J, j_element=j_elem, d_action=d_action,
                           h10=h10, h01=h01, closure=C, j_square_ok=j_square_ok,
                           commutes_with_d=commutes, routes_agree=routes_agree)


# ---------------------------------------------------------------- verification of u

class KSVerification:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def summary(self):
        return {"dim_even_algebra": self.dim_even, "dim_end_d": self.dim_end_d,
                "algebra_iso": self.algebra_iso, "injective": self.injective,
                "unit_to_identity": self.unit_to_identity,
                "grading_even": list(self.grading_even), "grading_end": list(self.grading_end),
                "intertwines": self.intertwines, "ok": self.ok}


def _eigen_dims(M, C):
    """Dims of the 0, 2i, -2i eigenspaces of an F-matrix, over F(i)."""
    K = C.K
    n = len(M)
    MK = [[C.embed(v) for v in row] for row in M]
    out = []
    for lam in (-2 * C.i, K.zero(), 2 * C.i):
        S = [[MK[i][j] - (lam if i == j else K.zero()) for j in range(n)] for i in range(n)]
        out.append(len(la.kernel_over(S, K)))
    return tuple(out)


def verify_u(k):
    D = k.even_algebra
    dim = k.dim
    F = k.period.field
    basis = [[Fraction(int(r == j)) for r in range(dim)] for j in range(dim)]
    lefts = [D.left_matrix(b) for b in basis]
    # End_D(H) = commutant of the right D-action
    # X R = R X: vec(X R) = (R^T kron I) vec X and vec(R X) = (I kron R) vec X
    rows = []
    I = la.identity(dim)
    for R in k.d_action:
        rows.extend(la.mat_sub(la.kron(la.transpose(R), I), la.kron(I, R)))
    comm = la.nullspace(rows)
    dim_end = len(comm)
    flat_lefts = [la.flatten(L) for L in lefts]
    injective = la.rank(flat_lefts) == dim
    spans = la.span_rank(flat_lefts + comm) == dim_end == dim
    mult_ok = all(la.mat_eq(la.matmul(lefts[a], lefts[b]), D.left_matrix(D.mul(basis[a], basis[b])))
                  for a in range(dim) for b in range(dim))
    unit_ok = la.mat_eq(D.left_matrix(D.unit), I)
    algebra_iso = injective and spans and mult_ok
    # gradings: ad(j) on the algebra, ad(J) on End_D via the commutant coordinates
    j = k.j_element
    ad_alg = la.mat_sub(D.left_matrix(j), D.right_matrix(j))
    C = k.closure
    grading_even = _eigen_dims(ad_alg, C)
    J = k.J
    comm_mats = [la.unflatten(v, dim, dim) for v in comm]
    comm_cols = la.transpose(comm)
    ad_end_cols = []
    for X in comm_mats:
        Y = la.mat_sub(la.matmul(J, X), la.matmul(X, J))
        flat = la.flatten(Y)
        coords = []
        for l in range(F.degree):
            coords.append(la.solve(comm_cols, [a.c[l] if hasattr(a, "c") else Fraction(a) for a in flat]))
        ad_end_cols.append([F.element([coords[l][r] for l in range(F.degree)]) for r in range(dim_end)])
    grading_end = _eigen_dims(la.transpose(ad_end_cols), C)
    # exact intertwining: [J, L_c] = L_{[j, c]}
    intertwines = True
    for a in range(dim):
        lhs = la.mat_sub(la.matmul(J, lefts[a]), la.matmul(lefts[a], J))
        jc = la.matvec(ad_alg, basis[a])
        rhs = _combine(F, [(F(v), lefts[r]) for r, v in enumerate(jc)], dim)
        if lhs != rhs:
            intertwines = False
            break
    symmetric = grading_even[0] == grading_even[2]
    ok = (algebra_iso and unit_ok and intertwines and grading_even == grading_end and symmetric
          and dim_end == dim)
    out = KSVerification(dim_even=dim, dim_end_d=dim_end, algebra_iso=algebra_iso,
                         injective=injective, unit_to_identity=unit_ok, grading_even=grading_even,
                         grading_end=grading_end, intertwines=intertwines, ok=ok)
    if not ok:
        raise VerificationFailed("u is not certified", out.summary())
    return out


def grading_is_additive(k):
    """Weight pieces of ad(j) multiply additively, checked on basis pairs of the pieces."""
    C = k.closure
    K = C.K
    D = k.even_algebra
    j = k.j_element
    ad = la.mat_sub(D.left_matrix(j), D.right_matrix(j))
    n = len(ad)
    adK = [[C.embed(v) for v in row] for row in ad]
    pieces = {}
    for w, lam in ((-1, -2 * C.i), (0, K.zero()), (1, 2 * C.i)):
        S = [[adK[a][b] - (lam if a == b else K.zero()) for b in range(n)] for a in range(n)]
        pieces[w] = la.kernel_over(S, K)
    def mulK(u, v):
        out = [K.zero()] * n
        for a, x in enumerate(u):
            if x.is_zero():
                continue
            for b, y in enumerate(v):
                if y.is_zero():
                    continue
                c = x * y
                for r, t in enumerate(D.table[a][b]):
                    if t:
                        out[r] = out[r] + c * t
        return out

    for w1, P in pieces.items():
        for w2, Q in pieces.items():
            w = w1 + w2
            for u in P:
                for v in Q:
                    prod = mulK(u, v)
                    if all(z.is_zero() for z in prod):
                        continue
                    if abs(w) > 1:
                        return False
                    target = pieces[w]
                    if la.generic_rank(target + [prod], K.one()) != len(target):
                        return False
    return True


# ---------------------------------------------------------------- doubling

def ks_double(p, seed=0):
    """V+<1> and V+<1>+<1>: Kuga-Satake on the odd-rank one and the doubling isomorphism."""
    from .reptheory import doubling_check

    report = {}
    if isinstance(p, QuadSpace):
        U = p
    else:
        p.validate()
        E, U, _, _ = _e_space(p)
        if U.rank % 2 == 0 and E.degree == 1:
            n = p.n
            G = [row + [Fraction(0)] for row in p.gram] + [[Fraction(0)] * n + [Fraction(1)]]
            sharp = PeriodDatum(G, p.field, p.embedding, p.x + [p.field.zero()],
                                p.y + [p.field.zero()])
            ks = kuga_satake(sharp)
            report["kuga_satake"] = ks.summary()
            report["verify_u"] = verify_u(ks).summary()
    rep = doubling_check(U, seed)
    report["doubling"] = {k: v for k, v in rep.as_dict().items()}
    report["ok"] = rep.iso_found and report.get("verify_u", {"ok": True})["ok"]
    return report
