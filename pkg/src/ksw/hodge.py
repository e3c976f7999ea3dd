"""K3-type Hodge structures from exact period data.

A period datum is omega = x + i y with x, y vectors over a real number field F
(with a designated real embedding).  Complex subspaces live over F(i), built
as an explicit quadratic extension.
"""

from fractions import Fraction
from itertools import product

from . import linalg as la
from .errors import (BaseNotCM, DegenerateForm, EndNotAField, InconsistentInput, InputError,
                     IsotropyViolated, NoPositivePlane, NoPrimitiveType, PositivityViolated,
                     TauInPhi, TypeMismatch, UnsupportedSize, VerificationFailed)
from .quadspace import (QForm, QuadSpace, action_matrix, bilinear_lift,
                        diagonal_entries, hermitian_lift, orthogonal_basis, regular_action,
                        transfer)
from .scalars import (BaseChange, NumberField, adjoin_sqrt, classify_field, factor_over,
                      factor_rational, galois_closure, rat, rationals, roots_in, seeded,
                      sign_at, simple_extension, substitute)


# ---------------------------------------------------------------- F(i)

class GaussianClosure:
    """K = F(i) for a real number field F, with the embedding F -> K and conjugation."""

    def __init__(self, F):
        self.F = F
        if F.degree == 1:
            self.K = NumberField([1, 0, 1], "i")
            self._embed = lambda a: self.K.element([F(a).c[0]])
            self.i = self.K.gen()
            self._conj = lambda z: self.K.element([z.c[0], -z.c[1]])
            self.ext = None
        else:
            ext = simple_extension(F, [1, 0, 1], "w")
            self.ext = ext
            self.K = ext.field
            self._embed = ext.embed
            self.i = ext.root

            def conj(z):
                c = ext.to_tower(z)
                return ext.from_tower([c[0], -c[1]])

            self._conj = conj

    def embed(self, a):
        return self._embed(self.F(a))

    def conj(self, z):
        return self._conj(z)

    def pair(self, re, im):
        return self.embed(re) + self.i * self.embed(im)


_CLOSURES = {}


def gaussian_closure(F):
    if F not in _CLOSURES:
        _CLOSURES[F] = GaussianClosure(F)
    return _CLOSURES[F]


# ---------------------------------------------------------------- data

class EStructure:
    """An action of a number field E on V (matrices for algebra_generators(E)).

    ``sigma0`` is the image of E's generator in the coefficient field F for a
    totally real E (the embedding at which omega lives); None for CM data.
    """

    def __init__(self, field, action, sigma0=None):
        self.field = field
        self.action = [[[rat(x) for x in row] for row in A] for A in action]
        self.sigma0 = sigma0

    def act(self, a, dim):
        return action_matrix(self.field, self.action, a, dim)


class PeriodDatum:
    def __init__(self, form, field, embedding, x, y, e_structure=None):
        self.gram = [[rat(v) for v in row] for row in (form.gram if isinstance(form, QForm) else form)]
        self.n = len(self.gram)
        self.field = field
        self.embedding = embedding
        self.x = [field(a) for a in x]
        self.y = [field(a) for a in y]
        self.e_structure = e_structure
        if len(self.x) != self.n or len(self.y) != self.n:
            raise InputError("period vectors have the wrong length")

    def phi(self, v, w):
        F = self.field
        acc = F.zero()
        for i in range(self.n):
            if v[i].is_zero() if hasattr(v[i], "is_zero") else v[i] == 0:
                continue
            for j in range(self.n):
                g = self.gram[i][j]
                if g:
                    acc = acc + v[i] * g * w[j]
        return acc

    def gx(self):
        return [sum((self.gram[i][j] * self.x[j] for j in range(self.n)), self.field.zero())
                for i in range(self.n)]

    def gy(self):
        return [sum((self.gram[i][j] * self.y[j] for j in range(self.n)), self.field.zero())
                for i in range(self.n)]

    def validate(self):
        if la.det(self.gram) == 0:
            raise DegenerateForm("form is degenerate")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(self.n) for j in range(self.n)):
            raise InputError("form is not symmetric")
        xx, yy, xy = self.phi(self.x, self.x), self.phi(self.y, self.y), self.phi(self.x, self.y)
        if xx != yy or not xy.is_zero():
            raise IsotropyViolated("phi(omega, omega) != 0",
                                   {"phi_xx": str(xx), "phi_yy": str(yy), "phi_xy": str(xy)})
        if sign_at(self.embedding, xx) != 1:
            raise PositivityViolated("phi(x, x) is not positive at the designated embedding",
                                     {"phi_xx": str(xx)})
        es = self.e_structure
        if es is not None and es.sigma0 is not None:
            A = es.act(es.field.gen(), self.n)
            t = self.field(es.sigma0)
            for v in (self.x, self.y):
                Av = [sum((A[i][j] * v[j] for j in range(self.n)), self.field.zero()) for i in range(self.n)]
                if Av != [t * a for a in v]:
                    raise InputError("omega is not supported at the designated embedding")
        return self

    def to_json(self):
        out = {"form": [[f"{v.numerator}/{v.denominator}" for v in r] for r in self.gram],
               "coeff_field": self.field.to_json(),
               "embedding": self.embedding.to_json(),
               "x": [a.to_json() for a in self.x], "y": [a.to_json() for a in self.y]}
        es = self.e_structure
        if es is not None:
            out["e_action"] = {"field": es.field.to_json(),
                               "action": [[[f"{v.numerator}/{v.denominator}" for v in r] for r in A]
                                          for A in es.action],
                               "sigma0": es.sigma0.to_json() if es.sigma0 is not None else None}
        return out

    @classmethod
    def from_json(cls, obj):
        from .scalars import RealEmbedding, count_roots, squarefree_part, sturm_sequence

        F = NumberField.from_json(obj["coeff_field"])
        lo, hi = obj["embedding"]
        emb = RealEmbedding(F, rat(lo), rat(hi))
        if F.degree > 1 and count_roots(sturm_sequence(squarefree_part(F.min_poly)), emb.lo, emb.hi) != 1:
            raise InputError("embedding interval must isolate exactly one real root")

        def vec(v):
            return [F.element([rat(c) for c in a]) if isinstance(a, list) else F(rat(a)) for a in v]

        es = None
        if obj.get("e_action"):
            e = obj["e_action"]
            E = NumberField.from_json(e["field"])
            s0 = e.get("sigma0")
            s0 = (F.element([rat(c) for c in s0]) if isinstance(s0, list) else F(rat(s0))) \
                if s0 is not None else None
            es = EStructure(E, e["action"], s0)
        return cls(obj["form"], F, emb, vec(obj["x"]), vec(obj["y"]), es)


def _rows_over(F, rows):
    """Split F-coefficient rows (rational unknowns) into rational rows."""
    return la.split_rows(rows, lambda a: list(F(a).c))


def _field_complement(p):
    """F-basis of the phi-orthogonal complement of the plane spanned by x, y."""
    return la.kernel_over([p.gx(), p.gy()], p.field)


# ---------------------------------------------------------------- decomposition

def hodge_decomposition(p):
    p.validate()
    C = gaussian_closure(p.field)
    omega = [C.pair(a, b) for a, b in zip(p.x, p.y)]
    omega_bar = [C.conj(z) for z in omega]
    v00 = _field_complement(p)
    if len(v00) != p.n - 2:
        raise VerificationFailed("orthogonal complement has the wrong dimension")
    return {"V1-1": [omega], "V00": [[C.embed(a) for a in v] for v in v00], "V-11": [omega_bar],
            "dims": (1, len(v00), 1), "closure": C, "V00_F": v00}


def endomorphism_algebra(p, v00=None):
    """Rational f preserving the Hodge decomposition: f(omega) in F(i) omega, f(V00) in V00."""
    p.validate()
    F, n = p.field, p.n
    d = F.degree
    v00 = v00 if v00 is not None else _field_complement(p)
    # unknowns: f_ij (index i*n + j), then a_l, b_l (l < d)
    N = n * n + 2 * d
    powers = [F.element([0] * l + [1]) for l in range(d)]
    rows = []
    for i in range(n):
        # f(x)_i - a x_i + b y_i = 0 and f(y)_i - b x_i - a y_i = 0
        r1 = [F.zero()] * N
        r2 = [F.zero()] * N
        for j in range(n):
            r1[i * n + j] = p.x[j]
            r2[i * n + j] = p.y[j]
        for l in range(d):
            r1[n * n + l] = -powers[l] * p.x[i]
            r1[n * n + d + l] = powers[l] * p.y[i]
            r2[n * n + l] = -powers[l] * p.y[i]
            r2[n * n + d + l] = -powers[l] * p.x[i]
        rows += [r1, r2]
    gx, gy = p.gx(), p.gy()
    for v in v00:
        for g in (gx, gy):
            r = [F.zero()] * N
            for i in range(n):
                for j in range(n):
                    r[i * n + j] = v[j] * g[i]
            rows.append(r)
    ker = la.nullspace(_rows_over(F, rows))
    mats = [[[k[i * n + j] for j in range(n)] for i in range(n)] for k in ker]
    basis = la.row_basis([la.flatten(M) for M in mats])
    return [la.unflatten(v, n, n) for v in basis]


def split_algebraic_transcendental(p):
    p.validate()
    F = p.field
    rows = _rows_over(F, [p.gx(), p.gy()])
    v_alg = la.nullspace(rows)
    if v_alg:
        v_alg = la.row_basis(v_alg)
        v_trans = la.nullspace([la.matvec(la.transpose(p.gram), v) for v in v_alg])
    else:
        v_trans = [[Fraction(int(i == j)) for i in range(p.n)] for j in range(p.n)]
    return v_alg, v_trans


def _restrict_datum(p, basis):
    """The datum induced on a rational subspace containing x and y (basis vectors as columns)."""
    F = p.field
    B = la.transpose(basis)
    d = F.degree

    def coords(v):
        cols = [la.solve(B, [a.c[l] for a in v]) for l in range(d)]
        return [F.element([cols[l][k] for l in range(d)]) for k in range(len(basis))]

    G = [[sum((basis[a][i] * p.gram[i][j] * basis[b][j] for i in range(p.n) for j in range(p.n)),
              Fraction(0)) for b in range(len(basis))] for a in range(len(basis))]
    return PeriodDatum(G, F, p.embedding, coords(p.x), coords(p.y))


# ---------------------------------------------------------------- classification

class ZarhinResult:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def summary(self):
        return {"kind": self.kind, "e_degree": self.e_field.degree, "mt_dim": self.mt_dim,
                "predicted_dim": self.predicted_dim, "v_alg_dim": len(self.v_alg),
                "v_trans_dim": len(self.v_trans), "weil_in_mt": self.weil_in_mt,
                "e_min_poly": [str(c) for c in self.e_field.min_poly]}


def _skew_commutant(G, gens):
    """Rational X with X^T G + G X = 0 commuting with the given matrices."""
    n = len(G)
    rows = []
    for a in range(n):
        for b in range(n):
            row = [Fraction(0)] * (n * n)
            # (X^T G)[a][b] = sum_k X[k][a] G[k][b]; (G X)[a][b] = sum_k G[a][k] X[k][b]
            for k in range(n):
                row[k * n + a] += G[k][b]
                row[k * n + b] += G[a][k]
            rows.append(row)
    for Z in gens:
        # (X Z - Z X)[a][b]
        for a in range(n):
            for b in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[a * n + k] += Z[k][b]
                    row[k * n + b] -= Z[a][k]
                rows.append(row)
    ker = la.nullspace(rows)
    return [[[v[a * n + b] for b in range(n)] for a in range(n)] for v in ker]


def _generic_field_element(mats, rng):
    from .reptheory import _min_poly_matrix

    n = len(mats[0])
    if len(mats) == 1:
        return la.identity(n), [Fraction(-1), Fraction(1)]
    # basis members first, for a readable presentation; then random combinations
    candidates = list(mats)
    for _ in range(30):
        Z = la.zeros(n, n)
        for M in mats:
            Z = la.mat_add(Z, la.mat_scale(M, Fraction(rng.randint(-4, 4))))
        candidates.append(Z)
    for Z in candidates:
        mp = _min_poly_matrix(Z)
        if len(mp) - 1 == len(mats):
            return Z, mp
    return None, None


def weil_operator(p):
    """J_P(v) = (phi(v, x) y - phi(v, y) x) / phi(x, x), an F-matrix."""
    n = p.n
    gx, gy = p.gx(), p.gy()
    c = p.phi(p.x, p.x)
    return [[(gx[j] * p.y[i] - gy[j] * p.x[i]) / c for j in range(n)] for i in range(n)]


def zarhin_classify(p, seed=0):
    p.validate()
    v_alg, v_trans = split_algebraic_transcendental(p)
    pt = _restrict_datum(p, v_trans) if v_alg else p
    m = pt.n
    End = endomorphism_algebra(pt)
    rng = seeded(seed)
    # End must be a field: commutative, and a generic element generates it
    for X in End:
        for Y in End:
            if not la.mat_eq(la.matmul(X, Y), la.matmul(Y, X)):
                raise EndNotAField("endomorphism algebra is not commutative", {"dim": len(End)})
    Z, mp = _generic_field_element(End, rng)
    if Z is None or len(factor_rational(mp)) != 1 or factor_rational(mp)[0][1] != 1:
        raise EndNotAField("endomorphism algebra is not a field", {"dim": len(End)})
    E = NumberField(mp, "e") if len(mp) > 2 else rationals()
    cls = classify_field(E) if E.degree > 1 else None
    if cls is None:
        from .scalars import FieldClassification

        cls = FieldClassification("totally_real")
    G = pt.gram
    if cls.kind == "totally_real":
        kind = "totally_real"
        form = QForm(G, E, [Z] if E.degree > 1 else [])
        lifted = bilinear_lift(form) if E.degree > 1 else QuadSpace(E, [[E(g) for g in r] for r in G])
        rank = m // E.degree
        predicted = E.degree * rank * (rank - 1) // 2
    elif cls.kind == "cm":
        kind = "cm"
        form = QForm(G, E, [Z], hermitian=True)
        lifted = hermitian_lift(form)
        rank = m // E.degree
        predicted = (E.degree // 2) * rank * rank
    else:
        raise EndNotAField("endomorphism field is neither totally real nor CM")
    mt = _skew_commutant(G, [Z])
    if len(mt) != predicted:
        raise VerificationFailed("Lie algebra dimension differs from the prediction",
                                 {"mt_dim": len(mt), "predicted": predicted})
    # Weil operator must lie in mt (x) F
    J = weil_operator(pt)
    flat = [la.flatten(X) for X in mt]
    weil_ok = True
    for l in range(pt.field.degree):
        target = [a.c[l] for a in la.flatten(J)]
        if any(target) and not la.in_span(flat, target):
            weil_ok = False
    # embed mt into End(V), zero on V_alg
    T = la.transpose(v_trans + v_alg)
    Tinv = la.inverse(T)
    full = []
    for X in mt:
        big = la.block_diag(X, la.zeros(len(v_alg), len(v_alg)))
        full.append(la.matmul(la.matmul(T, big), Tinv))
    if not weil_ok:
        raise VerificationFailed("Weil operator is not in the Mumford-Tate Lie algebra")
    return ZarhinResult(kind=kind, e_field=E, e_generator=Z, lifted=lifted, mt=full, mt_trans=mt,
                        mt_dim=len(mt), predicted_dim=predicted, v_alg=v_alg, v_trans=v_trans,
                        weil_in_mt=weil_ok, endomorphisms=End)


# ---------------------------------------------------------------- constructing data

def _is_square(E, c):
    return bool(roots_in(E, [-E(c), E.zero(), E.one()]))


def _pick_sqrt(E, c, rng):
    """Quadratic extension F = E(sqrt c); returns the Extension."""
    return adjoin_sqrt(E, c, "t")


def rm_period(E, space, sigma0, seed=0):
    """A period datum on the transfer of ``space`` with omega supported at sigma0."""
    if space.kind != "symmetric":
        raise InputError("rm_period needs a symmetric space")
    if E.degree > 1 and classify_field(E).kind != "totally_real":
        raise InputError("rm_period needs a totally real field")
    rng = seeded(seed)
    B = orthogonal_basis(space)
    diag = diagonal_entries(space, B)
    pos = [k for k, a in enumerate(diag) if sign_at(sigma0, a) > 0]
    if len(pos) < 2:
        raise NoPositivePlane("fewer than two positive directions at the embedding",
                              {"positive": len(pos)})
    i, j = pos[0], pos[1]
    prod_ = diag[i] * diag[j]
    if _is_square(E, prod_):
        c = next(k for k in range(2, 50) if not _is_square(E, k))
    else:
        c = prod_
    ext = adjoin_sqrt(E, c, "t")
    F = ext.field
    sq = ext.root
    t = ext.base_image
    # designated embedding of F restricting to sigma0
    lo, hi = sigma0.lo, sigma0.hi
    emb = None
    for e in F.real_embeddings:
        if E.degree == 1 or (sign_at(e, t - lo) > 0 and sign_at(e, t - hi) < 0):
            if sign_at(e, ext.embed(c)) > 0:
                emb = e
                break
    if emb is None:
        raise NoPositivePlane("no real embedding of the auxiliary field over sigma0")
    n = space.rank
    a = [ext.embed(x) for x in diag]
    s = sq if not _is_square(E, prod_) else None
    if s is None:
        r = roots_in(E, [-prod_, E.zero(), E.one()])[0]
        s = ext.embed(r)
    x0 = [F.zero()] * n
    y0 = [F.zero()] * n
    x0[i] = s / a[i]
    y0[j] = F.one()
    # generic rotation in SO(diag a) over F via a Cayley transform
    for _ in range(20):
        K = [[F.zero()] * n for _ in range(n)]
        for r_ in range(n):
            for c_ in range(r_ + 1, n):
                v = Fraction(rng.randint(1, 4), rng.randint(1, 3)) + sq * Fraction(rng.randint(1, 3))
                K[r_][c_] = v
                K[c_][r_] = -v
        S = [[K[r_][c_] / a[r_] for c_ in range(n)] for r_ in range(n)]
        I = la.identity(n, F.one())
        try:
            R = la.matmul(la.mat_sub(I, S), la.generic_inverse(la.mat_add(I, S), F.one()))
        except Exception:
            continue
        break
    xr = la.matvec(R, x0)
    yr = la.matvec(R, y0)
    Bf = [[ext.embed(v) for v in row] for row in B]
    u = la.matvec(Bf, xr)
    w = la.matvec(Bf, yr)
    d = E.degree
    if d > 1:
        eps = BaseChange(E, F.one()).idempotent(t)
        h = eps.c
    else:
        h = (F.one(),)

    def to_q(vec):
        out = []
        for comp in vec:
            for l in range(d):
                out.append(h[l] * comp)
        return out

    form = transfer(space)
    es = EStructure(E, regular_action(E, n), t if d > 1 else None)
    if d == 1:
        es = None
    datum = PeriodDatum(form, F, emb, to_q(u), to_q(w), es)
    datum.extension = ext
    return datum.validate()


# ---------------------------------------------------------------- Hodge numbers of norms

def norm_hodge_numbers(h, E=None):
    """Convolution of per-embedding Hodge numbers over all choices (p_s, q_s)."""
    if E is not None and len(h) != E.degree:
        raise InconsistentInput("one table per embedding is required")
    totals = {sum(t.values()) for t in h}
    if len(totals) != 1:
        raise InconsistentInput("per-embedding totals differ", {"totals": sorted(totals)})
    out = {(0, 0): 1}
    for table in h:
        nxt = {}
        for (i, j), a in out.items():
            for (p, q), b in table.items():
                if b:
                    key = (i + p, j + q)
                    nxt[key] = nxt.get(key, 0) + a * b
        out = nxt
    return dict(sorted(out.items()))


# ---------------------------------------------------------------- CM types

class CMTypeData:
    def __init__(self, cm_field, ambient, roots, conj, phi, tau, primitive, witnesses=None):
        self.cm_field = cm_field
        self.ambient = ambient      # field containing all embeddings (as roots)
        self.roots = roots          # Sigma(E), as roots of the minimal polynomial
        self.conj = conj            # complex conjugation on the ambient field
        self.Phi = phi              # indices into roots
        self.tau = tau              # index into roots
        self.primitive = primitive
        self.witnesses = witnesses or []

    def conj_index(self, k):
        c = self.conj(self.roots[k])
        return next(i for i, r in enumerate(self.roots) if r == c)

    def summary(self):
        return {"degree": self.cm_field.degree, "Phi": list(self.Phi), "tau": self.tau,
                "primitive": self.primitive}


def _cm_subfield_partitions(E, roots, ambient):
    """For each proper CM subfield K of E, the partition of Sigma(E) into fibres over Sigma(K)."""
    d = E.degree
    theta = E.gen()
    facs = [f for f, _ in factor_over(E, list(E.min_poly))]
    lin = next(k for k, f in enumerate(facs) if len(f) == 2 and f[0] == -theta)
    others = [k for k in range(len(facs)) if k != lin]
    parts = []
    seen = set()
    for mask in range(1 << len(others)):
        g = facs[lin]
        for b, k in enumerate(others):
            if mask >> b & 1:
                g = _poly_mul_field(g, facs[k])
        deg_g = len(g) - 1
        if deg_g in (1, d) or d % deg_g:
            continue
        sub_deg = d // deg_g
        coeffs = [c for c in g if not c.is_rational()]
        beta = None
        for trial in product(range(-2, 3), repeat=len(coeffs)):
            cand = sum((c * k for c, k in zip(coeffs, trial)), E.zero())
            mp = cand.minimal_polynomial()
            if len(mp) - 1 == sub_deg:
                beta = cand
                break
        if beta is None:
            continue
        key = tuple(mp)
        if key in seen:
            continue
        seen.add(key)
        K = NumberField(mp)
        if classify_field(K).kind != "cm":
            continue
        images = [substitute(beta, r) for r in roots]
        blocks = {}
        for k, im in enumerate(images):
            blocks.setdefault(tuple(im.c), []).append(k)
        parts.append((mp, list(blocks.values())))
    return parts


def _poly_mul_field(a, b):
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def cm_ambient(E):
    """Galois closure of a CM field with its complex conjugation."""
    L, roots, _ = galois_closure([E])
    cl = classify_field(L) if L.degree > 1 else None
    if cl is None or cl.kind != "cm":
        raise BaseNotCM("Galois closure is not CM")
    return L, roots[0], cl.conj


def select_cm_type(E, tau=0, ambient=None):
    """A CM type avoiding the embedding ``tau`` (index into the roots), primitive if possible.

    ``ambient`` is an optional (field, roots, conjugation) triple in which E splits.
    """
    if classify_field(E).kind != "cm":
        raise BaseNotCM("field is not CM")
    L, roots, conj = ambient if ambient is not None else cm_ambient(E)
    d = E.degree
    if len(roots) != d:
        raise UnsupportedSize("field does not split in the ambient field")
    conj_idx = [next(i for i, r in enumerate(roots) if r == conj(roots[k])) for k in range(d)]
    pairs = []
    for k in range(d):
        if k < conj_idx[k]:
            pairs.append((k, conj_idx[k]))
    tau_pair = next(pr for pr in pairs if tau in pr)
    free_pairs = [pr for pr in pairs if pr != tau_pair]
    forced = tau_pair[1] if tau_pair[0] == tau else tau_pair[0]
    parts = _cm_subfield_partitions(E, roots, L)
    witnesses = []
    for choice in product((0, 1), repeat=len(free_pairs)):
        phi = sorted([forced] + [pr[c] for pr, c in zip(free_pairs, choice)])
        induced_from = None
        for mp, blocks in parts:
            if all(set(b) <= set(phi) or not (set(b) & set(phi)) for b in blocks):
                induced_from = mp
                break
        if induced_from is None:
            return CMTypeData(E, L, roots, conj, phi, tau, True, witnesses)
        witnesses.append({"Phi": phi, "induced_from": [str(c) for c in induced_from]})
    raise NoPrimitiveType("every CM type avoiding tau is induced", {"types": witnesses})


def cm_type_from(E, phi, tau, ambient=None):
    """Wrap an explicit choice of Phi (indices) after checking it is a CM type."""
    L, roots, conj = ambient if ambient is not None else cm_ambient(E)
    data = CMTypeData(E, L, roots, conj, sorted(phi), tau, None)
    sphi = set(phi)
    bar = {data.conj_index(k) for k in sphi}
    if sphi & bar or len(sphi | bar) != E.degree:
        raise InputError("Phi is not a CM type")
    return data


# ---------------------------------------------------------------- half-twist

class HalfTwist:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    def summary(self):
        return {"dim": self.dim, "h10": len(self.h10), "h01": len(self.h01), "pure": self.pure,
                "polarization_alternating": self.polarization_alternating}


def half_twist_ambient(p):
    """The working field F(i), the roots of E in it, and its conjugation."""
    C = gaussian_closure(p.field)
    E = p.e_structure.field
    roots = roots_in(C.K, list(E.min_poly))
    if len(roots) != E.degree:
        raise UnsupportedSize("E does not split in F(i)")
    roots.sort(key=lambda r: r.c)
    return C.K, roots, C.conj


def distinguished_embedding(p, ambient):
    """Index of the root through which E acts on omega."""
    K, roots, _ = ambient
    C = gaussian_closure(p.field)
    A = p.e_structure.act(p.e_structure.field.gen(), p.n)
    omega = [C.pair(a, b) for a, b in zip(p.x, p.y)]
    Aw = la.matvec([[K.element([v]) for v in row] for row in A], omega)
    for k, r in enumerate(roots):
        if Aw == [r * z for z in omega]:
            return k
    raise TypeMismatch("omega is not an E-eigenvector")


def half_twist(p, cm):
    """Weight-one Hodge structure on H^1(A) (x)_E V, with H^{1,0} supported on Phi."""
    p.validate()
    es = p.e_structure
    if es is None:
        raise InputError("half-twist needs an E-structure")
    E = es.field
    if classify_field(E).kind != "cm":
        raise BaseNotCM("half-twist needs a CM field")
    n = p.n
    C = gaussian_closure(p.field)
    K = C.K
    if cm.ambient != K:
        raise TypeMismatch("CM type is not expressed in the working field F(i)")
    if cm.tau in cm.Phi:
        raise TauInPhi("the distinguished embedding lies in Phi", {"tau": cm.tau, "Phi": cm.Phi})
    A = es.act(E.gen(), n)
    AK = [[K.element([v]) for v in row] for row in A]
    omega = [C.pair(a, b) for a, b in zip(p.x, p.y)]
    omega_bar = [C.conj(z) for z in omega]
    Aw = la.matvec(AK, omega)
    tau_root = cm.roots[cm.tau]
    if Aw != [tau_root * z for z in omega]:
        raise TypeMismatch("E does not act on omega through tau")
    tau_bar = cm.conj_index(cm.tau)
    G = [[K.element([v]) for v in row] for row in p.gram]
    gw = la.matvec(G, omega)
    gwb = la.matvec(G, omega_bar)

    def eig(k, extra=()):
        M = [[AK[i][j] - (cm.roots[k] if i == j else K.zero()) for j in range(n)] for i in range(n)]
        return la.kernel_over(M + list(extra), K)

    h10, h01 = [omega], [omega_bar]
    h10 += eig(tau_bar, [gw, gwb])
    h01 += eig(cm.tau, [gw, gwb])
    for k in range(E.degree):
        if k in (cm.tau, tau_bar):
            continue
        (h10 if k in cm.Phi else h01).extend(eig(k))
    total = la.generic_rank(h10 + h01, K.one())
    conj_ok = la.generic_rank(h01 + [[C.conj(z) for z in v] for v in h10], K.one()) == len(h01)
    pure = len(h10) == len(h01) == n // 2 and total == n and conj_ok
    if not pure:
        raise TypeMismatch("result is not pure of type (1,0) + (0,1)",
                           {"h10": len(h10), "h01": len(h01), "rank": total})
    # polarization psi(v, w) = phi(xi v, w) with xi = theta - conj(theta)
    cl = classify_field(E)
    xi = E.gen() - cl.conj(E.gen())
    Axi = es.act(xi, n)
    psi = la.matmul(la.transpose(Axi), p.gram)
    alt = all(psi[i][j] == -psi[j][i] for i in range(n) for j in range(n))
    return HalfTwist(dim=n, h10=h10, h01=h01, pure=pure, psi=psi, polarization_alternating=alt,
                     field=K)


def preserves(ht, f):
    """Does the rational endomorphism f preserve H^{1,0} of the half-twist?"""
    K = ht.field
    fK = [[K.element([v]) for v in row] for row in f]
    imgs = [la.matvec(fK, v) for v in ht.h10]
    return la.generic_rank(ht.h10 + imgs, K.one()) == len(ht.h10)


def qi_example():
    """E = Q(i), V = E^2 with the hermitian form diag(1, -1)."""
    E = NumberField([1, 0, 1], "i")
    space = QuadSpace(E, [[1, 0], [0, -1]], "hermitian")
    form = transfer(space)
    Q = rationals()
    emb = Q.real_embeddings[0]
    x = [1, 0, 0, 0]
    y = [0, -1, 0, 0]
    return PeriodDatum(form, Q, emb, x, y, EStructure(E, form.e_action, None))
