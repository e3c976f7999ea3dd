"""Clifford algebras of quadratic spaces over etale algebras.

The algebra is built on an orthogonal basis e_1..e_n of the space.  Monomials
e_S are bitmasks ordered by (cardinality, lexicographic index tuple), and
products are evaluated by the sign rule, so no table is ever stored.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial

from . import linalg as la
from .errors import (DegenerateForm, DoesNotPreserveV, EvenRank, InputError, MixedParents,
                     NotInvertible, OddElement, TooLarge, VerificationFailed)
from .quadspace import QuadSpace, diagonal_entries, orthogonal_basis

MAX_Q_RANK = 12


def _subsets(n):
    out = []
    for k in range(n + 1):
        for c in combinations(range(n), k):
            out.append(sum(1 << i for i in c))
    return out


def mask_indices(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _popcount(x):
    return bin(x).count("1")


def blade_sign(s, t):
    """Sign of reordering e_S e_T into increasing order (ignoring squares)."""
    swaps = 0
    s >>= 1
    while s:
        swaps += _popcount(s & t)
        s >>= 1
    return -1 if swaps & 1 else 1


class CliffordAlgebra:
    def __init__(self, space, check_size=True):
        if space.kind != "symmetric":
            raise InputError("Clifford algebras need a symmetric form")
        n = space.rank
        if check_size and n * space.base.degree > MAX_Q_RANK:
            raise TooLarge(f"rank * [E:Q] = {n * space.base.degree} exceeds {MAX_Q_RANK}")
        self.space = space
        self.base = space.base
        self.rank = n
        self.change_of_basis = orthogonal_basis(space)
        self.q = diagonal_entries(space, self.change_of_basis)
        if any(not self.base.is_unit(x) for x in self.q):
            raise DegenerateForm("diagonal entry is not a unit")
        self.monomials = _subsets(n)
        self.index = {m: k for k, m in enumerate(self.monomials)}
        self.even = [m for m in self.monomials if _popcount(m) % 2 == 0]
        self.even_index = {m: k for k, m in enumerate(self.even)}
        self.dim = len(self.monomials)
        self.even_dim = len(self.even)
        self._inv_basis = None

    def __repr__(self):
        return f"CliffordAlgebra(rank={self.rank}, base={self.base!r})"

    # -- elements
    def element(self, coeffs):
        return CliffordElement(self, {m: self.base(c) for m, c in coeffs.items() if not self.base(c).is_zero()})

    def scalar(self, c):
        return self.element({0: c})

    def one(self):
        return self.scalar(1)

    def zero(self):
        return CliffordElement(self, {})

    def gen(self, i):
        """The i-th orthogonal basis vector."""
        return self.element({1 << i: 1})

    def monomial(self, mask):
        return self.element({mask: 1})

    def vector(self, v):
        """Image in C of a vector given in the original coordinates of the space."""
        if self._inv_basis is None:
            self._inv_basis = la.base_inverse(self.base, self.change_of_basis)
        w = la.matvec(self._inv_basis, [self.base(x) for x in v])
        return self.element({1 << i: w[i] for i in range(self.rank)})

    def from_vector(self, coeffs, even=True):
        basis = self.even if even else self.monomials
        return self.element({m: c for m, c in zip(basis, coeffs)})

    # -- products
    def mono_mul(self, s, t):
        """e_S e_T = coefficient * e_{S xor T}."""
        c = self.base.one() * blade_sign(s, t)
        common = s & t
        i = 0
        while common:
            if common & 1:
                c = c * self.q[i]
            common >>= 1
            i += 1
        return c, s ^ t

    def multiply(self, a, b):
        if a.alg is not self or b.alg is not self:
            raise MixedParents("elements belong to different Clifford algebras")
        out = {}
        for s, x in a.coeffs.items():
            for t, y in b.coeffs.items():
                c, m = self.mono_mul(s, t)
                v = x * y * c
                out[m] = out[m] + v if m in out else v
        return CliffordElement(self, {m: v for m, v in out.items() if not v.is_zero()})

    def coords(self, x, even=True):
        basis = self.even if even else self.monomials
        z = self.base.zero()
        if even and not x.is_even():
            raise OddElement("element is not even")
        return [x.coeffs.get(m, z) for m in basis]

    # -- representations
    def left_matrix(self, x, even=True):
        """Matrix of c -> x c on C+ (or on C when even=False); columns are images."""
        basis = self.even if even else self.monomials
        cols = [self.coords(self.multiply(x, self.monomial(m)), even) for m in basis]
        return la.transpose(cols)

    def right_matrix(self, x, even=True):
        basis = self.even if even else self.monomials
        cols = [self.coords(self.multiply(self.monomial(m), x), even) for m in basis]
        return la.transpose(cols)

    def inverse(self, g):
        L = self.left_matrix(g, even=False)
        rhs = self.coords(self.one(), even=False)
        try:
            sol = la.base_solve(self.base, L, rhs)
        except (ValueError, NotInvertible):
            raise NotInvertible("element is not invertible")
        inv = self.from_vector(sol, even=False)
        if self.multiply(g, inv) != self.one():
            raise NotInvertible("element is not invertible")
        return inv

    def bracket(self, a, b):
        return self.multiply(a, b) - self.multiply(b, a)


class CliffordElement:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = coeffs

    def _check(self, o):
        if not isinstance(o, CliffordElement):
            return self.alg.scalar(o)
        if o.alg is not self.alg:
            raise MixedParents("elements belong to different Clifford algebras")
        return o

    def __add__(self, o):
        o = self._check(o)
        out = dict(self.coeffs)
        for m, v in o.coeffs.items():
            out[m] = out[m] + v if m in out else v
        return CliffordElement(self.alg, {m: v for m, v in out.items() if not v.is_zero()})

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.alg, {m: -v for m, v in self.coeffs.items()})

    def __sub__(self, o):
        return self + (-self._check(o))

    def __mul__(self, o):
        if isinstance(o, CliffordElement):
            return self.alg.multiply(self, o)
        o = self.alg.base(o)
        return CliffordElement(self.alg, {m: v * o for m, v in self.coeffs.items() if not (v * o).is_zero()})

    def __rmul__(self, o):
        o = self.alg.base(o)
        return CliffordElement(self.alg, {m: o * v for m, v in self.coeffs.items() if not (o * v).is_zero()})

    def __eq__(self, o):
        if not isinstance(o, CliffordElement):
            o = self.alg.scalar(o)
        return self.alg is o.alg and self.coeffs == o.coeffs

    __hash__ = None

    def is_zero(self):
        return not self.coeffs

    def is_even(self):
        return all(_popcount(m) % 2 == 0 for m in self.coeffs)

    def is_odd(self):
        return all(_popcount(m) % 2 == 1 for m in self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in self.alg.monomials:
            if m in self.coeffs:
                name = "".join(f"e{i + 1}" for i in mask_indices(m)) or "1"
                parts.append(f"({self.coeffs[m]!r})*{name}")
        return " + ".join(parts)


def build_clifford(space):
    return CliffordAlgebra(space)


def multiply(a, b):
    if a.alg is not b.alg:
        raise MixedParents("elements belong to different Clifford algebras")
    return a.alg.multiply(a, b)


def rho_spin_matrix(alg, x):
    """Left multiplication by an even element on C+ in the even-monomial basis."""
    if not x.is_even():
        raise OddElement("rho_spin needs an even element")
    return alg.left_matrix(x)


def rho_ad_matrix(alg, g):
    """c -> g c g^-1 on C+, for invertible even g normalizing V."""
    if not g.is_even():
        raise OddElement("rho_ad needs an even element")
    ginv = alg.inverse(g)
    for i in range(alg.rank):
        img = alg.multiply(alg.multiply(g, alg.gen(i)), ginv)
        if any(_popcount(m) != 1 for m in img.coeffs):
            raise DoesNotPreserveV("conjugation does not preserve V", {"basis_vector": i})
    cols = [alg.coords(alg.multiply(alg.multiply(g, alg.monomial(m)), ginv)) for m in alg.even]
    return la.transpose(cols)


def ad_on_vectors(alg, X):
    """Matrix over E (orthogonal basis) of v -> X v - v X on V, for X in the Lie algebra."""
    cols = []
    for i in range(alg.rank):
        img = alg.bracket(X, alg.gen(i))
        if any(_popcount(m) != 1 for m in img.coeffs):
            raise DoesNotPreserveV("bracket does not preserve V")
        cols.append([img.coeffs.get(1 << j, alg.base.zero()) for j in range(alg.rank)])
    return la.transpose(cols)


class CSpinLie:
    """The Lie algebra of CSpin inside C+: E-scalars plus the span of e_i e_j."""

    def __init__(self, alg, basis, degree_two, bracket_table, ad_images):
        self.alg = alg
        self.basis = basis
        self.degree_two = degree_two
        self.bracket_table = bracket_table
        self.ad_images = ad_images

    @property
    def e_dim(self):
        return len(self.basis)


def cspin_lie(alg):
    if alg.rank < 2:
        raise InputError("cspin_lie needs rank >= 2")
    two = [alg.monomial((1 << i) | (1 << j)) for i, j in combinations(range(alg.rank), 2)]
    basis = [alg.one()] + two
    span_masks = {0} | {m for x in two for m in x.coeffs}
    table = {}
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            br = alg.bracket(x, y)
            if any(m not in span_masks for m in br.coeffs):
                raise VerificationFailed("Lie algebra is not closed under brackets", {"pair": [a, b]})
            table[(a, b)] = br
    ad = [ad_on_vectors(alg, X) for X in two]
    for A in ad:
        if not skew_for(A, alg.q, alg.base):
            raise VerificationFailed("adjoint image is not skew")
    return CSpinLie(alg, basis, two, table, ad)


def skew_for(A, q, base):
    """phi(Av, w) + phi(v, Aw) = 0 for the diagonal form with entries q."""
    n = len(q)
    for i in range(n):
        for j in range(n):
            if not (A[j][i] * q[j] + q[i] * A[i][j]).is_zero():
                return False
    return True


# ---------------------------------------------------------------- filtration

class CliffordFiltration:
    def __init__(self, alg, levels, dims, top_iso, equivariance):
        self.alg = alg
        self.levels = levels              # list of spanning masks per level
        self.dims = dims                  # E-dimensions
        self.top_iso = top_iso            # matrix: wedge basis -> top quotient coords
        self.equivariance = equivariance  # list of booleans per Lie generator

    @property
    def top_quotient_dim(self):
        return self.dims[-1] - self.dims[-2]


def _word_span(alg, length):
    """E-span (as coefficient rows over the even basis) of all products of `length` vectors."""
    rows = []
    for word in product(range(alg.rank), repeat=length):
        x = alg.one()
        for i in word:
            x = alg.multiply(x, alg.gen(i))
        rows.append(alg.coords(x))
    return rows


def _e_rank(base, rows):
    if not rows:
        return 0
    # E-rank = Q-rank of the E-span / [E:Q]
    qrows = []
    for r in rows:
        for b in base.q_basis():
            v = []
            for x in r:
                v.extend(base.q_coords(x * b))
            qrows.append(v)
    return la.rank(qrows) // base.degree


def filtration(alg):
    n = alg.rank
    if n % 2 == 0:
        raise EvenRank("the filtration certificate needs odd rank")
    m = n // 2
    rows, dims = [], []
    for i in range(m + 1):
        rows = rows + _word_span(alg, 2 * i)
        dims.append(_e_rank(alg.base, rows))
    if dims[-1] != alg.even_dim:
        raise VerificationFailed("top filtration level is not all of C+", {"dims": dims})
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise VerificationFailed("filtration is not strictly increasing", {"dims": dims})
    if dims[-1] - dims[-2] != comb(n, 2 * m):
        raise VerificationFailed("top quotient has the wrong dimension", {"dims": dims})
    top = [mk for mk in alg.even if _popcount(mk) == 2 * m]
    top_pos = {mk: k for k, mk in enumerate(top)}
    wedges = list(combinations(range(n), 2 * m))

    def top_coords(x):
        z = alg.base.zero()
        return [x.coeffs.get(mk, z) for mk in top]

    # antisymmetrization map from the wedge basis to the quotient
    cols = []
    for w in wedges:
        acc = alg.zero()
        for perm in permutations(range(2 * m)):
            sgn = _perm_sign(perm)
            x = alg.one()
            for k in perm:
                x = alg.multiply(x, alg.gen(w[k]))
            acc = acc + x * sgn
        acc = acc * Fraction(1, factorial(2 * m))
        cols.append(top_coords(acc))
    iso = la.transpose(cols)
    if la.base_rank_q(alg.base, iso) != len(wedges) * alg.base.degree:
        raise VerificationFailed("antisymmetrization is not an isomorphism onto the top quotient")
    # equivariance for each generator e_i e_j of so(V)
    eq = []
    for i, j in combinations(range(n), 2):
        X = alg.monomial((1 << i) | (1 << j))
        A = ad_on_vectors(alg, X)
        wedge_act = _wedge_action(A, wedges, alg.base)
        quot_cols = [top_coords(alg.bracket(X, alg.monomial(mk))) for mk in top]
        quot_act = la.transpose(quot_cols)
        eq.append(la.mat_eq(la.matmul(iso, wedge_act), la.matmul(quot_act, iso)))
    if not all(eq):
        raise VerificationFailed("quotient isomorphism is not equivariant")
    del top_pos
    return CliffordFiltration(alg, None, dims, iso, eq)


def _perm_sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def _wedge_action(A, wedges, base):
    """Derivation action of A on the exterior power with the sorted-tuple basis."""
    pos = {w: k for k, w in enumerate(wedges)}
    n = len(wedges)
    M = [[base.zero() for _ in range(n)] for _ in range(n)]
    for c, w in enumerate(wedges):
        for slot in range(len(w)):
            for r in range(len(A)):
                a = A[r][w[slot]]
                if a.is_zero():
                    continue
                new = list(w)
                new[slot] = r
                if len(set(new)) < len(new):
                    continue
                order = sorted(range(len(new)), key=lambda k: new[k])
                sgn = _perm_sign(order)
                key = tuple(sorted(new))
                M[pos[key]][c] = M[pos[key]][c] + a * sgn
    return M


def clifford_relations_hold(alg):
    """v_i v_j + v_j v_i = 2 G_ij for the original basis vectors of the space."""
    n = alg.rank
    vecs = [alg.vector([1 if k == i else 0 for k in range(n)]) for i in range(n)]
    G = alg.space.gram
    for i in range(n):
        for j in range(n):
            lhs = alg.multiply(vecs[i], vecs[j]) + alg.multiply(vecs[j], vecs[i])
            if lhs != alg.scalar(G[i][j] * 2):
                return False
    return True


def quadspace_diag(base, entries):
    n = len(entries)
    return QuadSpace(base, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])
