"""The norm functor from E-modules to Q-vector spaces.

N(M) is realized as Sym^d(M) modulo the relations Sym^d(e) t = Norm(e) t, where
d = [E:Q] and e runs over elements whose d-th powers span Sym^d(E).  Sym^d(M)
is modelled by polynomials in a Q-basis of M, with monomials as sorted index
tuples in lexicographic order.
"""

from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial

from . import linalg as la
from .errors import InputError, NotAssociative, NotELinear, NotFaithful, TooLarge, VerificationFailed
from .quadspace import action_matrix, algebra_generators, assemble, factors_of, regular_action
from .scalars import Dual, galois_closure, seeded, substitute


def _iszero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def sym_product(vectors):
    """Product in Sym of a list of vectors: dict sorted-tuple -> coefficient."""
    cur = {(): 1}
    for v in vectors:
        nxt = {}
        nz = [(i, x) for i, x in enumerate(v) if not _iszero(x)]
        for key, c in cur.items():
            for i, x in nz:
                k = tuple(sorted(key + (i,)))
                t = c * x
                nxt[k] = nxt[k] + t if k in nxt else t
        cur = nxt
    return cur


class EModule:
    """A Q-vector space Q^q_dim with an E-action given on algebra_generators(base)."""

    def __init__(self, base, action, q_dim):
        self.base = base
        self.q_dim = q_dim
        self.action = [[[Fraction(x) for x in row] for row in A] for A in action]
        gens = algebra_generators(base)
        if len(gens) != len(self.action):
            raise InputError("one action matrix per algebra generator is required")
        for A in self.action:
            for B in self.action:
                if not la.mat_eq(la.matmul(A, B), la.matmul(B, A)):
                    raise InputError("action matrices do not commute")
        self.rho_basis = [self.act(b) for b in base.q_basis()]
        ranks = []
        for k, f in enumerate(factors_of(base)):
            idem = self.act(_factor_one(base, k))
            r = la.rank(idem) if any(any(x for x in row) for row in idem) else 0
            if r % f.degree:
                raise InputError("action does not define an E-module")
            ranks.append(r // f.degree)
        self.ranks = ranks
        self.faithful = all(r > 0 for r in ranks)

    @classmethod
    def free(cls, base, rank):
        return cls(base, regular_action(base, rank), rank * base.degree)

    def act(self, e):
        return action_matrix(self.base, self.action, e, self.q_dim)

    def key(self):
        return (repr(self.base), self.q_dim,
                tuple(tuple(tuple(r) for r in A) for A in self.action))

    def is_e_linear(self, f):
        return all(la.mat_eq(la.matmul(f, A), la.matmul(A, f)) for A in self.action)


def _factor_one(base, k):
    return assemble(base, [g.one() if i == k else g.zero() for i, g in enumerate(factors_of(base))])


class NormModule:
    def __init__(self, source, d, monomials, carrier, proj):
        self.source = source
        self.d = d
        self.monomials = monomials                  # all Sym^d monomials
        self.mono_index = {m: i for i, m in enumerate(monomials)}
        self.carrier = carrier                      # monomials forming the carrier basis
        self.proj = proj                            # dim x len(monomials) rational
        self.dim = len(carrier)

    def project(self, poly):
        """Carrier coordinates of a Sym^d polynomial (dict), generic coefficients."""
        out = [None] * self.dim
        for mono, c in poly.items():
            if _iszero(c):
                continue
            col = self.mono_index[mono]
            for r in range(self.dim):
                p = self.proj[r][col]
                if p:
                    t = c * p
                    out[r] = t if out[r] is None else out[r] + t
        zero = next((c * 0 for c in poly.values()), Fraction(0))
        return [zero if x is None else x for x in out]


_CACHE = {}


def _spanning_elements(base, d):
    """Elements whose d-th powers span Sym^d(E): sum a_j b_j over |a| = d."""
    basis = base.q_basis()
    out = []
    for combo in combinations_with_replacement(range(len(basis)), d):
        e = base.zero()
        for j in combo:
            e = e + basis[j]
        out.append(e)
    return out


def norm_module(m):
    if not m.faithful:
        raise NotFaithful("module is not faithful; its norm is the zero space",
                          {"ranks": m.ranks, "norm_dim": 0})
    d = m.base.degree
    if m.q_dim > 12 or d > 3:
        raise TooLarge("desk scale is q_dim <= 12 and [E:Q] <= 3")
    key = m.key()
    if key in _CACHE:
        return _CACHE[key]
    n = m.q_dim
    monomials = list(combinations_with_replacement(range(n), d))
    S = len(monomials)
    idx = {mono: i for i, mono in enumerate(monomials)}
    rows = []
    for e in _spanning_elements(m.base, d):
        A = m.act(e)
        nrm = m.base.norm(e)
        cols = la.transpose(A)
        for t in monomials:
            poly = sym_product([cols[i] for i in t])
            row = [Fraction(0)] * S
            for mono, c in poly.items():
                row[idx[mono]] += c
            row[idx[t]] -= nrm
            if any(row):
                rows.append(row)
    # row-reduce with columns in reverse order so the carrier favours lex-small monomials
    rev = list(reversed(range(S)))
    if rows:
        R, piv = la.rref([[r[j] for j in rev] for r in rows])
    else:
        R, piv = [], []
    piv_orig = [rev[p] for p in piv]
    free = sorted(set(range(S)) - set(piv_orig))
    pos = {f: k for k, f in enumerate(free)}
    proj = [[Fraction(0)] * S for _ in free]
    for f in free:
        proj[pos[f]][f] = Fraction(1)
    for i, p in enumerate(piv_orig):
        for f in free:
            c = R[i][rev.index(f)]
            if c:
                proj[pos[f]][p] = -c
    nm = NormModule(m, d, monomials, [monomials[f] for f in free], proj)
    expected = 1
    for r, f in zip(m.ranks, factors_of(m.base)):
        expected *= r ** f.degree
    if nm.dim != expected:
        raise VerificationFailed("norm dimension law fails", {"dim": nm.dim, "expected": expected})
    _CACHE[key] = nm
    return nm


def nu(n, v):
    """Image of v^d in the carrier."""
    return n.project(sym_product([v] * n.d))


def _sym_apply(n, f, mono, target=None):
    cols = la.transpose(f)
    poly = sym_product([cols[i] for i in mono])
    return (target or n).project(poly)


def norm_morphism(n, f, target=None, check=True):
    """N(f) = proj o Sym^d(f) o section, for an E-linear f (any exact entry type)."""
    if check:
        src = n.source
        tgt = target.source if target is not None else src
        for A, B in zip(src.action, tgt.action):
            if not la.mat_eq(la.matmul(f, A), la.matmul(B, f)):
                raise NotELinear("map does not commute with the E-action")
    cols = [_sym_apply(n, f, mono, target) for mono in n.carrier]
    return la.transpose(cols)


def eta_lie(n, X):
    """Derivative of N at the identity: N(1 + eps X) = 1 + eps * eta_lie(X)."""
    size = len(X)
    D = [[Dual(Fraction(int(i == j)), X[i][j]) for j in range(size)] for i in range(size)]
    if not n.source.is_e_linear(X):
        raise NotELinear("map does not commute with the E-action")
    M = norm_morphism(n, D, check=False)
    return [[x.b if isinstance(x, Dual) else x * 0 for x in row] for row in M]


# ---------------------------------------------------------------- algebras

class EAlgebra:
    """An E-algebra on an EModule with rational structure constants table[i][j]."""

    def __init__(self, module, table, unit):
        self.module = module
        self.table = table
        self.unit = [Fraction(x) for x in unit]
        self.dim = module.q_dim

    def mul(self, a, b):
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                c = x * y
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return out

    def check_associative(self):
        n = self.dim
        for i in range(n):
            ei = [Fraction(int(k == i)) for k in range(n)]
            for j in range(n):
                ij = self.table[i][j]
                for k in range(n):
                    ek = [Fraction(int(t == k)) for t in range(n)]
                    if self.mul(ij, ek) != self.mul(ei, self.table[j][k]):
                        raise NotAssociative("structure constants are not associative",
                                             {"triple": [i, j, k]})
        for i in range(n):
            ei = [Fraction(int(k == i)) for k in range(n)]
            if self.mul(self.unit, ei) != ei or self.mul(ei, self.unit) != ei:
                raise NotAssociative("unit is not a two-sided identity")


class NormAlgebra:
    def __init__(self, carrier, table, unit):
        self.carrier = carrier
        self.table = table
        self.unit = unit
        self.dim = carrier.dim

    def mul(self, a, b):
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                c = x * y
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return out

    def left_matrix(self, a):
        cols = [self.mul(a, [Fraction(int(k == j)) for k in range(self.dim)]) for j in range(self.dim)]
        return la.transpose(cols)

    def right_matrix(self, a):
        cols = [self.mul([Fraction(int(k == j)) for k in range(self.dim)], a) for j in range(self.dim)]
        return la.transpose(cols)


def norm_bilinear(nA, nB, nC, pair):
    """Table of the norm of an E-bilinear map A x B -> C on carrier bases.

    ``pair(i, j)`` is the C-vector of (basis_i of A) * (basis_j of B).  The
    product of classes of monomials u, w is the class of
    (1/d!) * sum over permutations p of prod_k pair(u_{p k}, w_k).
    """
    d = nA.d
    cache = {}

    def pv(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = pair(i, j)
        return cache[(i, j)]

    perms = list(permutations(range(d)))
    scale = Fraction(1, factorial(d))
    table = []
    for u in nA.carrier:
        row = []
        for w in nB.carrier:
            acc = {}
            for p in perms:
                poly = sym_product([pv(u[p[k]], w[k]) for k in range(d)])
                for mono, c in poly.items():
                    acc[mono] = acc.get(mono, 0) + c
            row.append(nC.project({mono: c * scale for mono, c in acc.items()}))
        table.append(row)
    return table


def norm_algebra(alg, check=True):
    """The Q-algebra N(A) for an associative unital E-algebra A."""
    if check:
        alg.check_associative()
    n = norm_module(alg.module)
    table = norm_bilinear(n, n, n, lambda i, j: alg.table[i][j])
    unit = nu(n, alg.unit)
    return NormAlgebra(n, table, unit)


def norm_action(nA, nV, action):
    """Left action matrices of N(A) on N(V) given an E-bilinear action A x V -> V.

    ``action(i, j)`` is the V-vector of a_i . v_j.  Returns a function carrier(A)
    vector -> matrix on the carrier of N(V).
    """
    table = norm_bilinear(nA, nV, nV, action)

    def matrix(a):
        M = la.zeros(nV.dim, nV.dim)
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(nV.dim):
                col = table[i][j]
                for r in range(nV.dim):
                    if col[r]:
                        M[r][j] += x * col[r]
        return M

    return matrix


def scalar_algebra(base):
    """E itself as an E-algebra over the free rank-1 module."""
    mod = EModule.free(base, 1)
    basis = base.q_basis()
    table = [[base.q_coords(a * b) for b in basis] for a in basis]
    return EAlgebra(mod, table, base.q_coords(base.one()))


def matrix_algebra(base, size):
    """M_size(E) with Q-basis b_l E_ij at index ((i*size + j) * d + l)."""
    d = base.degree
    mod = EModule.free(base, size * size)
    basis = base.q_basis()
    N = size * size * d
    table = [[None] * N for _ in range(N)]
    for i in range(size):
        for j in range(size):
            for l in range(d):
                a = ((i * size + j) * d) + l
                for k in range(size):
                    for m in range(size):
                        for l2 in range(d):
                            b = ((k * size + m) * d) + l2
                            out = [Fraction(0)] * N
                            if j == k:
                                coords = base.q_coords(basis[l] * basis[l2])
                                pos = (i * size + m) * d
                                out[pos:pos + d] = coords
                            table[a][b] = out
    unit = [Fraction(0)] * N
    for i in range(size):
        unit[(i * size + i) * d:(i * size + i) * d + d] = base.q_coords(base.one())
    return EAlgebra(mod, table, unit)


def clifford_even_algebra(alg):
    """C+ of a Clifford algebra as an E-algebra (Q-basis b_l m_S at index S*d + l)."""
    base = alg.base
    d = base.degree
    basis = base.q_basis()
    mod = EModule.free(base, alg.even_dim)
    N = alg.even_dim * d
    table = [[None] * N for _ in range(N)]
    for s, ms in enumerate(alg.even):
        for t, mt in enumerate(alg.even):
            c, m = alg.mono_mul(ms, mt)
            pos = alg.even_index[m] * d
            for l in range(d):
                for l2 in range(d):
                    out = [Fraction(0)] * N
                    out[pos:pos + d] = base.q_coords(basis[l] * basis[l2] * c)
                    table[s * d + l][t * d + l2] = out
    unit = [Fraction(0)] * N
    unit[0:d] = base.q_coords(base.one())
    return EAlgebra(mod, table, unit)


def e_matrix_to_q(base, X):
    """Rational matrix of an E-linear map of E^r given by an E-matrix."""
    return la.restrict_matrix(X, base.mult_matrix)


def e_vector_to_q(base, v):
    out = []
    for x in v:
        out.extend(base.q_coords(x))
    return out


# ---------------------------------------------------------------- descent

class DescentReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def as_dict(self):
        return dict(self.__dict__)


def _factor_bases(m):
    """Per factor k: E_k-basis vectors (Q-vectors of M) of e_k M."""
    base = m.base
    out = []
    for k, f in enumerate(factors_of(base)):
        idem = m.act(_factor_one(base, k))
        fb = [assemble(base, [b if i == k else g.zero() for i, g in enumerate(factors_of(base))])
              for b in f.q_basis()]
        mats = [m.act(b) for b in fb]
        chosen, span = [], []
        for s in range(m.q_dim):
            u = [row[s] for row in idem]
            if not any(u):
                continue
            orbit = [la.matvec(M, u) for M in mats]
            if la.rank(span + orbit) == len(span) + f.degree:
                span = la.row_basis(span + orbit)
                chosen.append(u)
        out.append((chosen, mats))
    return out


def _e_coords(m, fbases, v):
    """Per factor k: the E_k-coordinates of e_k v in the chosen basis (as E_k elements)."""
    base = m.base
    res = []
    for k, (chosen, mats) in enumerate(fbases):
        f = factors_of(base)[k]
        idem = m.act(_factor_one(base, k))
        w = la.matvec(idem, v)
        cols = [la.matvec(M, u) for u in chosen for M in mats]
        sol = la.solve(la.transpose(cols), w)
        res.append([f.element(sol[j * f.degree:(j + 1) * f.degree]) for j in range(len(chosen))])
    return res


def descent_check(n, samples=3, seed=0):
    """Compare N(M) with the tensor product of the conjugates of M over a Galois closure."""
    m = n.source
    base = m.base
    facs = factors_of(base)
    if all(f.degree == 1 for f in facs) and len(facs) == 1:
        return DescentReport(closure_degree=1, embeddings=1, tensor_dim=n.dim, invariant_dim=n.dim,
                             carrier_dim=n.dim, iso_rank=n.dim, nu_compatible=True, ok=True)
    L, roots, autos = galois_closure(list(facs))
    # embeddings: (factor index, image of the factor generator in L)
    embs = [(k, r) for k, rs in enumerate(roots) for r in rs]
    if len(embs) != n.d:
        raise VerificationFailed("wrong number of embeddings")
    fbases = _factor_bases(m)
    dims = [len(fbases[k][0]) for k, _ in embs]
    shape_idx = _tensor_indices(dims)
    T = len(shape_idx)
    pos = {t: i for i, t in enumerate(shape_idx)}

    def sigma(k, r, a):
        return substitute(a, r) if facs[k].degree > 1 else L.element([a.c[0]])

    basis_coords = [_e_coords(m, fbases, [Fraction(int(i == j)) for i in range(m.q_dim)])
                    for j in range(m.q_dim)]

    def polarized(mono):
        out = [L.zero()] * T
        for p in permutations(range(n.d)):
            vecs = []
            for slot, (k, r) in enumerate(embs):
                c = basis_coords[mono[p[slot]]][k]
                vecs.append([sigma(k, r, x) for x in c])
            _accumulate_tensor(out, vecs, pos)
        scale = Fraction(1, factorial(n.d))
        return [x * scale for x in out]

    images = [polarized(mono) for mono in n.carrier]
    iso_rank = la.generic_rank(images, L.one())
    # Galois action: g sends slot sigma to slot g o sigma
    perm_of = []
    for g in autos:
        perm = []
        for k, r in embs:
            gr = substitute(r, g) if facs[k].degree > 1 else r
            perm.append(next(i for i, (k2, r2) in enumerate(embs) if k2 == k and r2 == gr))
        perm_of.append(perm)

    def act(g_idx, vec):
        g, perm = autos[g_idx], perm_of[g_idx]
        out = [L.zero()] * T
        for t, x in enumerate(vec):
            if x.is_zero():
                continue
            idx = shape_idx[t]
            new = [None] * n.d
            for slot in range(n.d):
                new[perm[slot]] = idx[slot]
            out[pos[tuple(new)]] = substitute(x, g)
        return out

    # fixed space over Q: solve (g - 1) v = 0 on Q-coordinates
    DL = L.degree
    qdim = T * DL
    rows = []
    for gi in range(1, len(autos)):
        cols = []
        for t in range(T):
            for l in range(DL):
                vec = [L.zero()] * T
                vec[t] = L.element([0] * l + [1])
                gv = act(gi, vec)
                diff = [a - b for a, b in zip(gv, vec)]
                col = []
                for x in diff:
                    col.extend(x.c)
                cols.append(col)
        rows.extend(la.transpose(cols))
    inv_dim = qdim - (la.rank(rows) if rows else 0)
    invariant_images = all(act(gi, v) == v for gi in range(len(autos)) for v in images)
    rng = seeded(seed)
    nu_ok = True
    for _ in range(samples):
        v = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m.q_dim)]
        lhs_c = nu(n, v)
        lhs = [L.zero()] * T
        for c, img in zip(lhs_c, images):
            if c:
                lhs = [a + b * c for a, b in zip(lhs, img)]
        coords = _e_coords(m, fbases, v)
        rhs = [L.zero()] * T
        _accumulate_tensor(rhs, [[sigma(k, r, x) for x in coords[k]] for k, r in embs], pos)
        if lhs != rhs:
            nu_ok = False
    ok = iso_rank == n.dim and inv_dim == n.dim and nu_ok and invariant_images
    return DescentReport(closure_degree=DL, embeddings=n.d, tensor_dim=T, invariant_dim=inv_dim,
                         carrier_dim=n.dim, iso_rank=iso_rank, nu_compatible=nu_ok,
                         images_invariant=invariant_images, ok=ok)


def _tensor_indices(dims):
    out = [()]
    for dm in dims:
        out = [t + (i,) for t in out for i in range(dm)]
    return out


def _accumulate_tensor(out, vecs, pos):
    cur = {(): None}
    for v in vecs:
        nxt = {}
        for key, c in cur.items():
            for i, x in enumerate(v):
                if x.is_zero():
                    continue
                nxt[key + (i,)] = x if c is None else c * x
        cur = nxt
    for key, c in cur.items():
        out[pos[key]] = out[pos[key]] + c
