"""Matrix Lie algebras over Q: commutants, gradings, isotypic decomposition.

Representations are rational matrices; Lie algebras over a number field enter
by restriction of scalars.
"""

from fractions import Fraction
from itertools import combinations

from . import linalg as la
from .errors import (DimensionShortfall, FormNotPreserved, InputError, SingularEigenbasis,
                     VerificationFailed)
from .scalars import (EtaleAlgebra, NumberField, factor_rational, poly_divmod, poly_mul,
                      poly_xgcd, seeded)


class LieAlgebraRep:
    def __init__(self, basis, dim=None, check=True):
        basis = [[[Fraction(x) for x in row] for row in X] for X in basis]
        if dim is None:
            if not basis:
                raise InputError("dimension needed for the zero Lie algebra")
            dim = len(basis[0])
        self.dim = dim
        # keep an independent subset
        if basis:
            keep = la.independent_subset([la.flatten(X) for X in basis])
            basis = [basis[k] for k in keep]
        self.basis = basis
        if check:
            flat = [la.flatten(X) for X in basis]
            for X, Y in combinations(basis, 2):
                br = la.flatten(la.commutator(X, Y))
                if any(br) and not la.in_span(flat, br):
                    raise InputError("basis is not closed under brackets")

    @property
    def lie_dim(self):
        return len(self.basis)

    @classmethod
    def generated_by(cls, gens, dim=None, limit=200):
        """Lie algebra generated by the given matrices (bracket closure)."""
        gens = [[[Fraction(x) for x in row] for row in X] for X in gens]
        basis, flat = [], []
        queue = list(gens)
        while queue:
            X = queue.pop(0)
            v = la.flatten(X)
            if not any(v) or (flat and la.in_span(flat, v)):
                continue
            for Y in basis:
                queue.append(la.commutator(X, Y))
            basis.append(X)
            flat.append(v)
            if len(basis) > limit:
                raise InputError("Lie closure too large")
        return cls(basis, dim if dim is not None else (len(gens[0]) if gens else None), check=False)


def commutant(rep):
    """Basis of {X : [X, g] = 0 for all g in rep}."""
    n = rep.dim
    if not rep.basis:
        return [[[Fraction(int(i == a and j == b)) for j in range(n)] for i in range(n)]
                for b in range(n) for a in range(n)]
    rows = []
    I = la.identity(n)
    for g in rep.basis:
        M = la.mat_sub(la.kron(I, g), la.kron(la.transpose(g), I))
        rows.extend(M)
    return [la.unflatten(v, n, n) for v in la.nullspace(rows)]


def commutant_of_matrices(mats, n):
    """Commutant of an arbitrary set of matrices (no closure needed)."""
    if not mats:
        return commutant(LieAlgebraRep([], n, check=False))
    I = la.identity(n)
    rows = []
    for g in mats:
        rows.extend(la.mat_sub(la.kron(I, g), la.kron(la.transpose(g), I)))
    return [la.unflatten(v, n, n) for v in la.nullspace(rows)]


def algebra_closed(mats):
    """Check that a span of matrices is closed under products and contains 1."""
    n = len(mats[0])
    flat = [la.flatten(X) for X in mats]
    if not la.in_span(flat, la.flatten(la.identity(n))):
        return False
    for X in mats:
        for Y in mats:
            if not la.in_span(flat, la.flatten(la.matmul(X, Y))):
                return False
    return True


# ---------------------------------------------------------------- cocharacters

class Cocharacter:
    """A grading of V: column k of ``eigenbasis`` has weight ``weights[k]``.

    Weight j means the torus acts on that line through z -> z^(-j).
    """

    def __init__(self, eigenbasis, weights):
        self.eigenbasis = eigenbasis
        self.weights = list(weights)
        if len(self.weights) != len(eigenbasis):
            raise InputError("one weight per eigenvector")

    def torus_matrix(self, z):
        P = self.eigenbasis
        one = P[0][0] * 0 + 1
        D = [[(z ** (-w) if i == j else z * 0) for j, w in enumerate(self.weights)]
             for i in range(len(P))]
        return la.matmul(la.matmul(P, D), la.generic_inverse(P, one))


def _one_of(M):
    x = M[0][0]
    return x * 0 + 1


def grading(mu, ambient_dim, form=None):
    """Weight spaces V^j; with a form, certify V^m and V^n orthogonal unless m + n = 0."""
    P = mu.eigenbasis
    if len(P) != ambient_dim:
        raise InputError("eigenbasis size does not match the ambient dimension")
    one = _one_of(P)
    d = la.generic_det(P, one)
    if la._is_zero(d):
        raise SingularEigenbasis("eigenbasis is not invertible")
    cols = la.transpose(P)
    spaces = {}
    for w, c in zip(mu.weights, cols):
        spaces.setdefault(w, []).append(c)
    cert = None
    if form is not None:
        cert = True
        for m, Vm in spaces.items():
            for n_, Vn in spaces.items():
                if m + n_ == 0:
                    continue
                for v in Vm:
                    for u in Vn:
                        val = sum((v[i] * form[i][j] * u[j] for i in range(ambient_dim)
                                   for j in range(ambient_dim)), one * 0)
                        if not la._is_zero(val):
                            cert = False
    return {"spaces": dict(sorted(spaces.items())),
            "dims": {w: len(v) for w, v in sorted(spaces.items())},
            "orthogonal": cert}


def is_k3_cocharacter(mu, form=None):
    g = grading(mu, len(mu.eigenbasis), form)
    if form is not None and not g["orthogonal"]:
        return False
    dims = g["dims"]
    return dims.get(1, 0) == 1 and dims.get(-1, 0) == 1 and all(abs(w) <= 1 for w in dims)


def is_weak_hodge(mu, hodge_numbers):
    dims = grading(mu, len(mu.eigenbasis))["dims"]
    keys = set(dims) | set(hodge_numbers)
    return all(dims.get(j, 0) == hodge_numbers.get(j, 0) for j in keys)


# ---------------------------------------------------------------- isotypic decomposition

class Summand:
    def __init__(self, basis, label, field=None, conjugation=None, gram=None, restricted=None,
                 center=None):
        self.basis = basis                # list of rational vectors
        self.label = label                # invariants | first_kind | second_kind
        self.field = field                # NumberField or EtaleAlgebra (split second kind)
        self.conjugation = conjugation    # image of the field generator (second kind)
        self.gram = gram
        self.restricted = restricted      # Lie algebra matrices in the summand basis
        self.center = center              # matrices on the summand spanning its centre

    @property
    def dim(self):
        return len(self.basis)

    def describe(self):
        out = {"label": self.label, "dim": self.dim}
        if isinstance(self.field, NumberField):
            out["field_min_poly"] = [str(c) for c in self.field.min_poly]
        elif isinstance(self.field, EtaleAlgebra):
            out["field_min_poly"] = "split"
        return out


class IsotypicDecomposition:
    def __init__(self, summands):
        self.summands = summands

    def labels(self):
        return [s.label for s in self.summands]


def _adjoint(G, Ginv, X):
    return la.matmul(Ginv, la.matmul(la.transpose(X), G))


def _restrict(X, basis):
    """Matrix of X on the invariant subspace spanned by ``basis`` (columns)."""
    B = la.transpose(basis)
    img = la.matmul(X, B)
    return la.solve_matrix(B, img)


def _poly_at_matrix(p, Z):
    n = len(Z)
    out = la.zeros(n, n)
    P = la.identity(n)
    for c in p:
        if c:
            out = la.mat_add(out, la.mat_scale(P, c))
        P = la.matmul(P, Z)
    return out


def _min_poly_matrix(Z):
    n = len(Z)
    powers = [la.flatten(la.identity(n))]
    P = la.identity(n)
    while True:
        P = la.matmul(P, Z)
        v = la.flatten(P)
        ker = la.nullspace(la.transpose(powers + [v]))
        if ker:
            k = ker[0]
            return [c / k[-1] for c in k]
        powers.append(v)


def _central_idempotents(center, rng):
    """Primitive idempotents of a commutative semisimple algebra of matrices."""
    n = len(center[0])
    dimz = len(center)
    for _ in range(40):
        coeffs = [Fraction(rng.randint(-5, 5)) for _ in center]
        Z = la.zeros(n, n)
        for c, M in zip(coeffs, center):
            Z = la.mat_add(Z, la.mat_scale(M, c))
        mp = _min_poly_matrix(Z)
        facs = factor_rational(mp)
        if any(mult > 1 for _, mult in facs):
            continue
        if sum(len(f) - 1 for f, _ in facs) != dimz:
            continue
        idems = []
        for i, (f, _) in enumerate(facs):
            rest = [Fraction(1)]
            for j, (g, _) in enumerate(facs):
                if j != i:
                    rest = poly_mul(rest, g)
            # q = rest * s with s * rest = 1 mod f
            _, s, _ = poly_xgcd(rest, f)
            q = poly_divmod(poly_mul(rest, s), mp)[1]
            idems.append((_poly_at_matrix(q, Z), f, Z))
        return idems
    raise VerificationFailed("could not split the centre of the commutant")


def isotypic_decompose(rep, form, seed=0):
    G = [[Fraction(x) for x in row] for row in form]
    n = rep.dim
    for X in rep.basis:
        if not la.is_zero_matrix(la.mat_add(la.matmul(la.transpose(X), G), la.matmul(G, X))):
            raise FormNotPreserved("Lie algebra does not preserve the form")
    summands = []
    # invariants
    if rep.basis:
        V0 = la.nullspace([row for X in rep.basis for row in X])
    else:
        V0 = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if V0:
        summands.append(Summand(V0, "invariants", gram=_gram_on(G, V0)))
    if len(V0) == n:
        return IsotypicDecomposition(summands)
    # orthogonal complement of V0
    Vp = la.nullspace([la.matvec(la.transpose(G), v) for v in V0]) if V0 else \
        [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    restricted = [_restrict(X, Vp) for X in rep.basis]
    m = len(Vp)
    Gp = _gram_on(G, Vp)
    Gpinv = la.inverse(Gp)
    C = commutant_of_matrices(restricted, m)
    # centre of the commutant
    Z = commutant_of_matrices(C, m)
    Z = [X for X in _intersect_matrix_spaces(Z, C, m)]
    rng = seeded(seed)
    idems = _central_idempotents(Z, rng)
    used = set()
    projs = [e for e, _, _ in idems]
    for i, (e, f, Zgen) in enumerate(idems):
        if i in used:
            continue
        estar = _adjoint(Gp, Gpinv, e)
        partner = next(j for j, p in enumerate(projs) if la.mat_eq(p, estar))
        if partner != i:
            used.update({i, partner})
            P = la.mat_add(e, projs[partner])
            W = _image(P)
            basis = [la.matvec(la.transpose(Vp), w) for w in W]
            field = EtaleAlgebra([NumberField(f), NumberField(f)])
            summands.append(Summand(basis, "second_kind", field=field, conjugation="swap",
                                    gram=_gram_on(G, basis),
                                    restricted=[_restrict(X, W) for X in restricted],
                                    center=None))
            del Wi
            continue
        used.add(i)
        W = _image(e)
        basis = [la.matvec(la.transpose(Vp), w) for w in W]
        zeta = _restrict(la.matmul(Zgen, e), W)
        field = NumberField(f)
        zstar = _restrict(_adjoint(Gp, Gpinv, la.matmul(Zgen, e)), W)
        label = "first_kind" if la.mat_eq(zstar, zeta) else "second_kind"
        conj = None
        if label == "second_kind":
            # express zeta* as a polynomial in zeta
            powers = [la.identity(len(W))]
            for _ in range(field.degree - 1):
                powers.append(la.matmul(powers[-1], zeta))
            coeffs = la.solve(la.transpose([la.flatten(P) for P in powers]), la.flatten(zstar))
            conj = field.element(coeffs)
        summands.append(Summand(basis, label, field=field, conjugation=conj,
                                gram=_gram_on(G, basis),
                                restricted=[_restrict(X, W) for X in restricted],
                                center=[zeta]))
    for s in summands:
        if s.label != "invariants" and la.det(s.gram) == 0:
            raise VerificationFailed("restricted form is degenerate")
    return IsotypicDecomposition(summands)


def _gram_on(G, vecs):
    return [[sum((v[i] * G[i][j] * w[j] for i in range(len(G)) for j in range(len(G))
                  if v[i] and w[j]), Fraction(0)) for w in vecs] for v in vecs]


def _image(P):
    return la.row_basis(la.transpose(P))


def _intersect_matrix_spaces(A, B, n):
    flatA = [la.flatten(X) for X in A]
    flatB = [la.flatten(X) for X in B]
    inter = la.intersect_spaces(flatA, flatB)
    return [la.unflatten(v, n, n) for v in inter]


# ---------------------------------------------------------------- group identification

class GroupIdentification:
    def __init__(self, group, predicted_dim, attained_dim, field_degree, rank):
        self.group = group
        self.predicted_dim = predicted_dim
        self.attained_dim = attained_dim
        self.field_degree = field_degree
        self.rank = rank

    @property
    def attained(self):
        return self.predicted_dim == self.attained_dim

    def as_dict(self):
        return {"group": self.group, "predicted_dim": self.predicted_dim,
                "attained_dim": self.attained_dim, "attained": self.attained}


def identify_k3_group(summand, strict=False):
    """Predicted SO or U group of a summand with its Lie dimension, compared with the action."""
    if summand.label == "invariants":
        raise InputError("invariant summand carries no group")
    field = summand.field
    deg = field.degree
    rank = summand.dim // deg
    if summand.label == "first_kind":
        group = "SO"
        predicted = deg * rank * (rank - 1) // 2
    else:
        group = "U"
        predicted = (deg // 2) * rank * rank
    mats = summand.restricted or []
    attained = la.rank([la.flatten(X) for X in mats]) if mats else 0
    res = GroupIdentification(group, predicted, attained, deg, rank)
    if strict and not res.attained:
        raise DimensionShortfall(f"acting Lie algebra has dimension {attained} < {predicted}",
                                 res.as_dict())
    return res


# ---------------------------------------------------------------- product of sl2

def _sl2_basis():
    E = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    F = [[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]]
    H = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]]
    return [E, F, H]


def _left_on_m2(A):
    """X -> A X on M_2 with row-major basis E11, E12, E21, E22."""
    return la.kron(A, la.identity(2))


def _right_on_m2(B):
    """X -> X B on M_2 with row-major basis."""
    return la.kron(la.identity(2), la.transpose(B))


def _in_slot(M, k, s, size=4):
    out = [[Fraction(1)]]
    for j in range(s):
        out = la.kron(out, M if j == k else la.identity(size))
    return out


def product_sl2(s, which="full"):
    """Sample Lie algebras inside prod sl2 acting on the tensor product of s copies of M_2."""
    basis = []
    if which == "full":
        for k in range(s):
            basis.extend(_in_slot(_left_on_m2(X), k, s) for X in _sl2_basis())
    elif which == "diagonal":
        for X in _sl2_basis():
            acc = None
            for k in range(s):
                M = _in_slot(_left_on_m2(X), k, s)
                acc = M if acc is None else la.mat_add(acc, M)
            basis.append(acc)
    elif which == "cartan":
        basis.append(_in_slot(_left_on_m2(_sl2_basis()[2]), 0, s))
    else:
        raise InputError(f"unknown sample {which!r}")
    return LieAlgebraRep(basis, 4 ** s)


def right_multiplication_algebra(s):
    mats = []
    units = []
    for i in range(2):
        for j in range(2):
            B = la.zeros(2, 2)
            B[i][j] = Fraction(1)
            units.append(_right_on_m2(B))
    idx = [()]
    for _ in range(s):
        idx = [t + (u,) for t in idx for u in range(4)]
    for t in idx:
        M = [[Fraction(1)]]
        for u in t:
            M = la.kron(M, units[u])
        mats.append(M)
    return mats


class FullnessResult:
    def __init__(self, full, commutant_dim, expected_dim, lie_dim, commutant_basis):
        self.full = full
        self.commutant_dim = commutant_dim
        self.expected_dim = expected_dim
        self.lie_dim = lie_dim
        self.commutant = commutant_basis

    def __bool__(self):
        return self.full

    def as_dict(self):
        return {"full": self.full, "commutant_dim": self.commutant_dim,
                "expected_commutant_dim": self.expected_dim, "lie_dim": self.lie_dim}


def product_sl2_fullness(h, s=None):
    if s is None:
        n = h.dim
        s = 0
        while 4 ** s < n:
            s += 1
        if 4 ** s != n:
            raise InputError("representation is not on a tensor power of M_2")
    if s > 3:
        raise InputError("desk scale is at most three factors")
    C = commutant(h)
    R = right_multiplication_algebra(s)
    flatC = [la.flatten(X) for X in C]
    equal = len(C) == len(R) and all(la.in_span(flatC, la.flatten(X)) for X in R)
    full = equal and h.lie_dim == 3 * s
    return FullnessResult(full, len(C), len(R), h.lie_dim, C)


# ---------------------------------------------------------------- doubling

class DoublingReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def as_dict(self):
        return {k: v for k, v in self.__dict__.items() if not k.startswith("_")}


def doubling_check(U, seed=0):
    """Certify C+_{E/Q}(U + <1> + <1>) = C+_{E/Q}(U + <1>)^(2^[E:Q]) as modules over O(U)."""
    from .clifford import CliffordAlgebra
    from .normfunctor import (EModule, e_matrix_to_q, eta_lie, norm_module,
                              norm_morphism)
    from .quadspace import QuadSpace, diagonal_entries, orthogonal_basis

    base = U.base
    if U.rank > 3 or base.degree > 2:
        raise InputError("desk scale is rank <= 3 and [E:Q] <= 2")
    q = diagonal_entries(U, orthogonal_basis(U))
    r = U.rank

    def diag(entries):
        k = len(entries)
        return QuadSpace(base, [[entries[i] if i == j else base.zero() for j in range(k)]
                                for i in range(k)])

    one = base.one()
    C1 = CliffordAlgebra(diag(q + [one]))
    C2 = CliffordAlgebra(diag(q + [one, one]))
    d = base.degree
    sides = []
    for C in (C1, C2):
        mod = EModule.free(base, C.even_dim)
        nm = norm_module(mod)
        sides.append((C, nm))

    def actions(C, nm):
        mats = []
        for i, j in combinations(range(r), 2):
            X = C.monomial((1 << i) | (1 << j))
            for b in base.q_basis():
                Xb = X * b
                ad = [C.coords(C.bracket(Xb, C.monomial(m))) for m in C.even]
                mats.append(eta_lie(nm, e_matrix_to_q(base, la.transpose(ad))))
        # reflection of the first basis vector of U
        refl = [[base.zero()] * C.even_dim for _ in range(C.even_dim)]
        for k, m in enumerate(C.even):
            refl[k][k] = -one if m & 1 else one
        mats.append(norm_morphism(nm, e_matrix_to_q(base, refl)))
        return mats

    A1 = actions(*sides[0])
    A2 = actions(*sides[1])
    copies = 2 ** d
    n1 = sides[0][1].dim
    n2 = sides[1][1].dim
    rhs = [la.block_diag(*([M] * copies)) for M in A1]
    N = n1 * copies
    # T : rhs -> lhs with T R = L T
    rows = []
    I_r, I_l = la.identity(N), la.identity(n2)
    for R, L in zip(rhs, A2):
        rows.extend(la.mat_sub(la.kron(la.transpose(R), I_l), la.kron(I_r, L)))
    ker = la.nullspace(rows) if rows else la.nullspace([[Fraction(0)] * (N * n2)])
    rng = seeded(seed)
    iso = None
    for _ in range(20):
        if not ker or n2 != N:
            break
        v = [Fraction(0)] * (N * n2)
        for k in ker:
            c = Fraction(rng.randint(-3, 3))
            if c:
                v = [a + c * b for a, b in zip(v, k)]
        T = la.unflatten(v, n2, N)
        if la.det(T) != 0:
            iso = T
            break
    ok = iso is not None
    if ok:
        ok = all(la.mat_eq(la.matmul(iso, R), la.matmul(L, iso)) for R, L in zip(rhs, A2))
    return DoublingReport(lhs_dim=n2, rhs_dim=N, copies=copies, single_dim=n1,
                          hom_dim=len(ker), generators=len(A2), iso_found=ok, _iso=iso)
