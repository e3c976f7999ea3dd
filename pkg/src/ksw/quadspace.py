"""Quadratic and hermitian spaces over etale algebras, transfer and lift."""

from fractions import Fraction

from . import linalg as la
from .errors import (BaseNotCM, DegenerateForm, InputError, NotEquivariant, NotFree,
                     SpanNotReached, TooLarge)
from .scalars import EtaleAlgebra, Gaussian, NumberField, rat, sign_at


# ---------------------------------------------------------------- base helpers

def factors_of(base):
    return base.factors


def component(base, a, k):
    return a if isinstance(base, NumberField) else base(a).comps[k]


def assemble(base, comps):
    return comps[0] if isinstance(base, NumberField) else base.element(comps)


def component_matrix(base, M, k):
    return [[component(base, base(x), k) for x in row] for row in M]


def assemble_matrix(base, mats):
    m, n = len(mats[0]), len(mats[0][0]) if mats[0] else 0
    return [[assemble(base, [M[i][j] for M in mats]) for j in range(n)] for i in range(m)]


def algebra_generators(base):
    """Generators of E as a Q-algebra, used to present E-actions."""
    if isinstance(base, NumberField):
        return [base.gen()] if base.degree > 1 else []
    gens = []
    for k, f in enumerate(base.factors):
        e = base.idempotent(k)
        gens.append(e)
        if f.degree > 1:
            gens.append(base.element([f.gen() if i == k else 0 for i in range(len(base.factors))]))
    return gens


def is_cm_base(base):
    return all(f.classification.kind == "cm" for f in factors_of(base))


def conj(base, a):
    return base.conj(a)


def _det_units(base, G):
    """Per-factor nondegeneracy of a square matrix over E."""
    for k, f in enumerate(factors_of(base)):
        if la.generic_det(component_matrix(base, G, k), f.one()).is_zero():
            return False
    return True


# ---------------------------------------------------------------- types

class QuadSpace:
    """A free module E^rank with a symmetric, alternating or hermitian Gram matrix."""

    def __init__(self, base, gram, kind="symmetric"):
        if isinstance(base, NumberField):
            pass
        elif not isinstance(base, EtaleAlgebra):
            raise InputError("base must be a number field or etale algebra")
        if kind not in ("symmetric", "hermitian", "alternating"):
            raise InputError(f"unknown form kind {kind!r}")
        gram = [[base(x) for x in row] for row in gram]
        n = len(gram)
        if n == 0 or any(len(r) != n for r in gram):
            raise InputError("gram must be a nonempty square matrix")
        self.base = base
        self.gram = gram
        self.kind = kind
        self.rank = n
        if kind == "hermitian":
            if not is_cm_base(base):
                raise BaseNotCM("hermitian forms need a CM base")
            ok = all(gram[i][j] == base.conj(gram[j][i]) for i in range(n) for j in range(n))
        elif kind == "symmetric":
            ok = all(gram[i][j] == gram[j][i] for i in range(n) for j in range(n))
        else:
            ok = all(gram[i][j] == -gram[j][i] for i in range(n) for j in range(n))
        if not ok:
            raise InputError(f"gram is not {kind}")
        if not _det_units(base, gram):
            raise DegenerateForm("gram determinant is not a unit in every factor")

    @property
    def underlying_q_dim(self):
        return self.rank * self.base.degree

    def form(self, v, w):
        """phi~(v, w) = v^T G w (conjugating w in the hermitian case)."""
        if self.kind == "hermitian":
            w = [self.base.conj(x) for x in w]
        acc = self.base.zero()
        for i in range(self.rank):
            if v[i] == 0:
                continue
            for j in range(self.rank):
                acc = acc + v[i] * self.gram[i][j] * w[j]
        return acc

    def __repr__(self):
        return f"QuadSpace(rank={self.rank}, kind={self.kind}, base={self.base!r})"

    def to_json(self):
        base = self.base if isinstance(self.base, EtaleAlgebra) else EtaleAlgebra([self.base])
        return {"base": base.to_json(), "rank": self.rank, "kind": self.kind,
                "gram": [[element_to_json(self.base, x) for x in row] for row in self.gram]}

    @classmethod
    def from_json(cls, obj):
        base = EtaleAlgebra.from_json(obj["base"])
        if len(base.factors) == 1:
            base = base.factors[0]
        gram = [[element_from_json(base, x) for x in row] for row in obj["gram"]]
        if "rank" in obj and obj["rank"] != len(gram):
            raise InputError("rank does not match gram size")
        return cls(base, gram, obj.get("kind", "symmetric"))


def element_to_json(base, a):
    return base(a).to_json()


def element_from_json(base, obj):
    if isinstance(base, NumberField):
        if isinstance(obj, (int, str)):
            return base(rat(obj))
        return base.element([rat(c) for c in obj])
    if isinstance(obj, (int, str)):
        return base(rat(obj))
    return base.element([f.element([rat(c) for c in comp]) if isinstance(comp, list) else f(rat(comp))
                         for f, comp in zip(base.factors, obj)])


class QForm:
    """A rational bilinear form, optionally with an E-action on Q^dim.

    ``e_action`` lists matrices for ``algebra_generators(e_base)``.
    """

    def __init__(self, gram, e_base=None, e_action=None, hermitian=False):
        gram = [[rat(x) for x in row] for row in gram]
        n = len(gram)
        if n == 0 or any(len(r) != n for r in gram):
            raise InputError("gram must be a nonempty square matrix")
        self.gram = gram
        self.dim = n
        self.symmetric = all(gram[i][j] == gram[j][i] for i in range(n) for j in range(n))
        self.alternating = all(gram[i][j] == -gram[j][i] for i in range(n) for j in range(n))
        if not (self.symmetric or self.alternating):
            raise InputError("form must be symmetric or alternating")
        if la.det(gram) == 0:
            raise DegenerateForm("rational form is degenerate")
        self.e_base = e_base
        self.hermitian = hermitian
        if e_base is not None:
            gens = algebra_generators(e_base)
            if e_action is None or len(e_action) != len(gens):
                raise InputError("e_action must give one matrix per algebra generator")
            self.e_action = [[[rat(x) for x in row] for row in A] for A in e_action]
        else:
            self.e_action = None

    def value(self, v, w):
        return sum((v[i] * self.gram[i][j] * w[j] for i in range(self.dim) for j in range(self.dim)
                    if v[i] and w[j]), Fraction(0))

    def act(self, a):
        """Matrix of multiplication by a in E on Q^dim."""
        return action_matrix(self.e_base, self.e_action, a, self.dim)

    def to_json(self):
        out = {"gram": [[f"{x.numerator}/{x.denominator}" for x in r] for r in self.gram]}
        if self.e_base is not None:
            base = self.e_base if isinstance(self.e_base, EtaleAlgebra) else EtaleAlgebra([self.e_base])
            out["e_base"] = base.to_json()
            out["e_action"] = [[[f"{x.numerator}/{x.denominator}" for x in r] for r in A] for A in self.e_action]
            out["hermitian"] = self.hermitian
        return out

    @classmethod
    def from_json(cls, obj):
        base = None
        if "e_base" in obj:
            base = EtaleAlgebra.from_json(obj["e_base"])
            if len(base.factors) == 1:
                base = base.factors[0]
        return cls(obj["gram"], base, obj.get("e_action"), obj.get("hermitian", False))


def action_matrix(base, gen_mats, a, dim):
    """Rational matrix of a in E, given matrices for algebra_generators(base)."""
    if isinstance(base, NumberField):
        a = base(a)
        if base.degree == 1:
            return la.mat_scale(la.identity(dim), a.c[0])
        G = gen_mats[0]
        out = la.zeros(dim, dim)
        P = la.identity(dim)
        for c in a.c:
            if c:
                out = la.mat_add(out, la.mat_scale(P, c))
            P = la.matmul(P, G)
        return out
    a = base(a)
    out = la.zeros(dim, dim)
    pos = 0
    for k, f in enumerate(base.factors):
        E = gen_mats[pos]
        G = gen_mats[pos + 1] if f.degree > 1 else None
        pos += 2 if f.degree > 1 else 1
        comp = a.comps[k]
        P = E
        for c in comp.c:
            if c:
                out = la.mat_add(out, la.mat_scale(P, c))
            if G is not None:
                P = la.matmul(P, G)
    return out


def regular_action(base, rank):
    """Matrices of the E-generators on E^rank with Q-basis (b_j e_i) at index i*d + j."""
    return [la.block_diag(*([base.mult_matrix(g)] * rank)) for g in algebra_generators(base)]


# ---------------------------------------------------------------- transfer and lift

def transfer(space):
    """tr_{E/Q} composed with the E-form, on the Q-basis b_j e_i (index i*d + j)."""
    base = space.base
    basis = base.q_basis()
    d = len(basis)
    n = space.rank
    cb = [base.conj(b) for b in basis] if space.kind == "hermitian" else basis
    G = la.zeros(n * d, n * d)
    for i in range(n):
        for k in range(n):
            g = space.gram[i][k]
            if g == 0:
                continue
            for a in range(d):
                ga = basis[a] * g
                for b in range(d):
                    G[i * d + a][k * d + b] = base.trace(ga * cb[b])
    return QForm(G, base, regular_action(base, n), hermitian=space.kind == "hermitian")


def _module_basis(form):
    """An E-basis u_1..u_n of Q^dim for the given E-action; raises NotFree."""
    base = form.e_base
    dim = form.dim
    D = base.degree
    if dim % D:
        raise NotFree("Q-dimension is not a multiple of [E:Q]")
    n = dim // D
    per_factor = []
    basis = base.q_basis()
    for k, f in enumerate(factors_of(base)):
        idem = form.act(assemble(base, [g.one() if i == k else g.zero()
                                         for i, g in enumerate(factors_of(base))]))
        fbasis = [assemble(base, [b if i == k else g.zero() for i, g in enumerate(factors_of(base))])
                  for b in f.q_basis()]
        mats = [form.act(b) for b in fbasis]
        chosen, span = [], []
        for s in range(dim):
            u = [row[s] for row in idem]
            if all(x == 0 for x in u):
                continue
            orbit = [la.matvec(M, u) for M in mats]
            trial = span + orbit
            if la.rank(trial) == len(span) + f.degree:
                span = la.row_basis(trial)
                chosen.append(u)
            if len(chosen) == n:
                break
        if len(chosen) != n or la.rank(span) != n * f.degree:
            raise NotFree("module is not free of constant rank")
        per_factor.append(chosen)
    del basis
    return [[sum((per_factor[k][i][s] for k in range(len(per_factor))), Fraction(0))
             for s in range(dim)] for i in range(n)], n


def _lift(form, kind):
    base = form.e_base
    if base is None:
        raise InputError("form carries no E-action")
    G = form.gram
    GT = la.transpose
    for g, A in zip(algebra_generators(base), form.e_action):
        if kind == "hermitian":
            B = form.act(base.conj(g))
        else:
            B = A
        if not la.mat_eq(la.matmul(GT(A), G), la.matmul(G, B)):
            raise NotEquivariant("the E-action is not self-adjoint for the form",
                                 {"generator": str(g)})
    us, n = _module_basis(form)
    basis = base.q_basis()
    D = len(basis)
    acts = [form.act(b) for b in basis]
    T = [[base.trace(basis[a] * basis[j]) for j in range(D)] for a in range(D)]
    gram = []
    for i in range(n):
        row = []
        for k in range(n):
            rhs = [form.value(la.matvec(acts[a], us[i]), us[k]) for a in range(D)]
            row.append(base.from_q_coords(la.solve(T, rhs)))
        gram.append(row)
    if form.symmetric and kind != "hermitian":
        out_kind = "symmetric"
    elif form.alternating and kind != "hermitian":
        out_kind = "alternating"
    else:
        out_kind = kind
    try:
        space = QuadSpace(base, gram, out_kind)
    except DegenerateForm:
        raise
    except InputError as exc:
        raise NotEquivariant(str(exc))
    # the transfer of the lift, in the chosen E-basis, must reproduce the form
    cb = [base.conj(b) for b in basis] if kind == "hermitian" else basis
    for i in range(n):
        for k in range(n):
            for a in range(D):
                for b in range(D):
                    lhs = form.value(la.matvec(acts[a], us[i]), la.matvec(acts[b], us[k]))
                    if lhs != base.trace(basis[a] * gram[i][k] * cb[b]):
                        raise NotEquivariant("form is not the transfer of an E-form")
    space.module_basis = us
    return space


def bilinear_lift(form):
    """The unique E-bilinear form whose trace is ``form``."""
    return _lift(form, "symmetric")


def hermitian_lift(form):
    """The unique E-hermitian form whose trace is ``form`` (CM base)."""
    if form.e_base is None or not is_cm_base(form.e_base):
        raise BaseNotCM("hermitian lift needs a CM base")
    if not form.symmetric:
        raise InputError("hermitian lift needs a symmetric rational form")
    return _lift(form, "hermitian")


# ---------------------------------------------------------------- diagonalization

def _gram_schmidt(G, field, hermitian, cj):
    n = len(G)
    one, zero = field.one(), field.zero()

    def f(v, w):
        if hermitian:
            w = [cj(x) for x in w]
        acc = zero
        for i in range(n):
            if v[i].is_zero():
                continue
            for j in range(n):
                acc = acc + v[i] * G[i][j] * w[j]
        return acc

    work = [[one if i == j else zero for i in range(n)] for j in range(n)]
    out = []
    while work:
        p = next((i for i, w in enumerate(work) if not f(w, w).is_zero()), None)
        if p is None:
            found = None
            for i in range(len(work)):
                for j in range(i + 1, len(work)):
                    for c in (one, field.gen()):
                        w = [x + c * y for x, y in zip(work[i], work[j])]
                        if not f(w, w).is_zero():
                            found = (i, w)
                            break
                    if found:
                        break
                if found:
                    break
            if found is None:
                raise DegenerateForm("form is degenerate")
            p, w = found
            work[p] = w
        piv = work.pop(p)
        pp = f(piv, piv)
        work = [[x - (f(w, piv) / pp) * y for x, y in zip(w, piv)] for w in work]
        out.append(piv)
    return [[out[j][i] for j in range(n)] for i in range(n)]


def orthogonal_basis(space):
    """Matrix B over E (columns = new basis) with B^T G B diagonal and nonzero diagonal."""
    if space.kind == "alternating":
        raise DegenerateForm("alternating forms have no orthogonal basis")
    herm = space.kind == "hermitian"
    mats = []
    for k, f in enumerate(factors_of(space.base)):
        Gk = component_matrix(space.base, space.gram, k)
        mats.append(_gram_schmidt(Gk, f, herm, f.conj))
    return assemble_matrix(space.base, mats)


def diagonal_entries(space, B=None):
    B = B if B is not None else orthogonal_basis(space)
    cols = la.transpose(B)
    return [space.form(c, c) for c in cols]


def signature_at(space, emb):
    """(positive, negative) counts of the form at a real embedding of one factor."""
    if space.kind != "symmetric":
        raise InputError("signature needs a symmetric form")
    k = next((i for i, f in enumerate(factors_of(space.base)) if f == emb.field), None)
    if k is None:
        raise InputError("embedding does not belong to a factor of the base")
    f = factors_of(space.base)[k]
    B = _gram_schmidt(component_matrix(space.base, space.gram, k), f, False, None)
    Gk = component_matrix(space.base, space.gram, k)
    p = q = 0
    for j in range(space.rank):
        col = [B[i][j] for i in range(space.rank)]
        val = sum((col[a] * Gk[a][b] * col[b] for a in range(space.rank) for b in range(space.rank)),
                  f.zero())
        s = sign_at(emb, val)
        if s == 0:
            raise DegenerateForm("zero diagonal entry")
        if s > 0:
            p += 1
        else:
            q += 1
    return p, q


def random_space(base, rank, rng, kind="symmetric", bound=3):
    """A seeded random nondegenerate space, for sampling."""
    while True:
        G = [[base.zero() for _ in range(rank)] for _ in range(rank)]
        for i in range(rank):
            for j in range(i, rank):
                a = base.random_element(rng, bound)
                if kind == "hermitian":
                    if i == j:
                        a = a + base.conj(a)
                    G[i][j] = a
                    G[j][i] = base.conj(a)
                elif kind == "alternating":
                    if i != j:
                        G[i][j] = a
                        G[j][i] = -a
                else:
                    G[i][j] = a
                    G[j][i] = a
        try:
            return QuadSpace(base, G, kind)
        except DegenerateForm:
            continue


# ---------------------------------------------------------------- unitary generation

def _cayley(S):
    n = len(S)
    I = la.identity(n)
    return la.matmul(la.mat_sub(I, S), la.inverse(la.mat_add(I, S)))


def _signed_permutations(n):
    from itertools import permutations, product

    out = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            M = la.zeros(n, n)
            for i, p in enumerate(perm):
                M[p][i] = Fraction(signs[i])
            out.append(M)
    return out


def _vec(M):
    out = []
    for row in M:
        for x in row:
            if isinstance(x, Gaussian):
                out.extend([x.re, x.im])
            else:
                out.append(x)
    return out


def _span_closure(gens, target, mul, budget=12):
    """Grow the Q-span of all products of the generators until it stabilizes."""
    basis_elems, rows = [], []
    frontier = list(gens)
    for _ in range(budget):
        new = []
        for x in frontier:
            v = _vec(x) if not isinstance(x, tuple) else _vec(x[0]) + _vec(x[1])
            if la.rank(rows + [v]) > len(rows):
                rows.append(v)
                basis_elems.append(x)
                new.append(x)
        if len(rows) == target or not new:
            break
        frontier = [mul(a, g) for a in new for g in gens]
    return basis_elems, len(rows)


def unitary_generation(n, involution="transpose"):
    """Certify that elements with d d* = 1 span the matrix algebra under products."""
    if n < 1 or n > 3:
        raise TooLarge("desk scale is n <= 3")
    inv = involution.lower()
    if inv == "transpose":
        gens = list(_signed_permutations(n))
        for i in range(n):
            for j in range(i + 1, n):
                for t in (Fraction(1), Fraction(1, 2), Fraction(2)):
                    S = la.zeros(n, n)
                    S[i][j], S[j][i] = t, -t
                    gens.append(_cayley(S))

        def star(d):
            return la.transpose(d)

        mul = la.matmul
        target = n * n
    elif inv == "adjoint":
        def g(M):
            return [[x if isinstance(x, Gaussian) else Gaussian(Fraction(x), Fraction(0)) for x in r]
                    for r in M]

        gens = [g(M) for M in _signed_permutations(n)]
        for i in range(n):
            D = [[Gaussian(Fraction(int(a == b)), Fraction(0)) for b in range(n)] for a in range(n)]
            D[i][i] = Gaussian(Fraction(0), Fraction(1))
            gens.append(D)
            for j in range(i + 1, n):
                for t in (Fraction(1), Fraction(2)):
                    S = la.zeros(n, n)
                    S[i][j], S[j][i] = t, -t
                    gens.append(g(_cayley(S)))

        def star(d):
            return [[x.conjugate() for x in r] for r in la.transpose(d)]

        mul = la.matmul
        target = 2 * n * n
    elif inv == "swap":
        mats = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    E = la.identity(n)
                    E[i][j] = Fraction(1)
                    mats.append(E)
            D = la.identity(n)
            D[i][i] = Fraction(2)
            mats.append(D)
        mats.append(la.identity(n))
        gens = [(A, la.transpose(la.inverse(A))) for A in mats]

        def star(d):
            return (la.transpose(d[1]), la.transpose(d[0]))

        def mul(a, b):
            return (la.matmul(a[0], b[0]), la.matmul(a[1], b[1]))

        target = 2 * n * n
    else:
        raise InputError(f"unknown involution {involution!r}")
    for d in gens:
        prod = mul(d, star(d))
        ok = (la.mat_eq(prod[0], la.identity(n)) and la.mat_eq(prod[1], la.identity(n))) \
            if isinstance(prod, tuple) else all(
                (prod[i][j] == (1 if i == j else 0)) for i in range(n) for j in range(n))
        if not ok:
            raise SpanNotReached("generator is not unitary")
    elems, dim = _span_closure(gens, target, mul)
    if dim < target:
        raise SpanNotReached(f"span reached dimension {dim} of {target}",
                             {"span_rank": dim, "target": target})
    return {"n": n, "involution": inv, "generators": len(gens), "span_rank": dim,
            "target_dim": target, "certified": True}
