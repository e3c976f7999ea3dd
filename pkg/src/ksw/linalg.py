"""Exact dense linear algebra.

Matrices are lists of rows.  Rational matrices are reduced with FLINT; a small
generic Gaussian elimination handles matrices over number fields and other
exact rings with a field of fractions.
"""

from fractions import Fraction

import flint

from .errors import NotInvertible


def _to_fmpq(x):
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return flint.fmpq(x)
    if hasattr(x, "is_rational"):
        q = x.to_rational()
        return flint.fmpq(q.numerator, q.denominator)
    return flint.fmpq(x)


def _from_fmpq(x):
    return Fraction(int(x.p), int(x.q))


def to_flint(M, ncols=None):
    rows = len(M)
    cols = len(M[0]) if rows else (ncols or 0)
    return flint.fmpq_mat(rows, cols, [_to_fmpq(x) for row in M for x in row])


def from_flint(F):
    return [[_from_fmpq(x) for x in row] for row in F.tolist()]


# ---------------------------------------------------------------- basic ops

def zeros(m, n, zero=Fraction(0)):
    return [[zero for _ in range(n)] for _ in range(m)]


def identity(n, one=Fraction(1)):
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(r) for r in zip(*M)] if M else []


def matmul(A, B):
    if not A:
        return []
    Bt = transpose(B)
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if not _is_zero(a)]
        out_row = []
        for col in Bt:
            acc = None
            for k, a in nz:
                b = col[k]
                if _is_zero(b):
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            if acc is None:
                acc = row[0] * col[0] * 0 if row else Fraction(0)
            out_row.append(acc)
        out.append(out_row)
    return out


def _is_zero(a):
    if isinstance(a, (int, Fraction)):
        return a == 0
    if hasattr(a, "is_zero"):
        return a.is_zero()
    return a == 0


def matvec(A, v):
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            if _is_zero(a) or _is_zero(x):
                continue
            t = a * x
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else (row[0] * v[0] * 0 if v else Fraction(0)))
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in r] for r in A]


def mat_neg(A):
    return [[-a for a in r] for r in A]


def commutator(A, B):
    return mat_sub(matmul(A, B), matmul(B, A))


def is_zero_matrix(A):
    return all(_is_zero(a) for r in A for a in r)


def mat_eq(A, B):
    return len(A) == len(B) and all(
        len(r) == len(s) and all(_is_zero(a - b) for a, b in zip(r, s)) for r, s in zip(A, B))


def kron(A, B):
    out = []
    for ra in A:
        for rb in B:
            out.append([a * b for a in ra for b in rb])
    return out


def block_diag(*blocks, zero=Fraction(0)):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n, zero)
    pos = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                out[pos + i][pos + j] = x
        pos += len(b)
    return out


def flatten(M):
    """Column-major vectorization: vec(M)[j*m + i] = M[i][j]."""
    m = len(M)
    n = len(M[0]) if m else 0
    return [M[i][j] for j in range(n) for i in range(m)]


def unflatten(v, m, n):
    return [[v[j * m + i] for j in range(n)] for i in range(m)]


def columns_to_matrix(cols):
    return transpose(cols)


def trace(A):
    acc = A[0][0] * 0 if A else Fraction(0)
    for i in range(len(A)):
        acc = acc + A[i][i]
    return acc


# ---------------------------------------------------------------- rational

def rref(M, ncols=None):
    """Reduced row echelon form of a rational matrix: (rows, pivot columns)."""
    if not M:
        return [], []
    R, rk = to_flint(M).rref()
    R = from_flint(R)[:rk]
    pivots = []
    for row in R:
        for j, x in enumerate(row):
            if x != 0:
                pivots.append(j)
                break
    return R, pivots


def rank(M):
    if not M or not M[0]:
        return 0
    return to_flint(M).rank()


def nullspace(M, ncols=None):
    """Basis of {v : M v = 0} for a rational matrix."""
    n = len(M[0]) if M else (ncols or 0)
    if not M:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def det(M):
    if not M:
        return Fraction(1)
    return _from_fmpq(to_flint(M).det())


def inverse(M):
    F = to_flint(M)
    if F.det() == 0:
        raise NotInvertible("singular matrix")
    return from_flint(F.inv())


def solve(A, b):
    """One solution x of A x = b (rational); raises ValueError if inconsistent."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def solve_matrix(A, B):
    """X with A X = B, columnwise."""
    cols = [solve(A, c) for c in transpose(B)]
    return transpose(cols)


def row_basis(vectors):
    """A basis (in rref form) for the span of the given rational vectors."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    R, _ = rref(vectors)
    return R


def span_rank(vectors):
    if not vectors:
        return 0
    return rank(vectors)


def in_span(basis_rows, v):
    if not basis_rows:
        return all(x == 0 for x in v)
    return rank(basis_rows + [v]) == rank(basis_rows)


def independent_subset(vectors):
    """Indices of a greedy maximal independent subset (first come first kept)."""
    kept, rows = [], []
    r = 0
    for k, v in enumerate(vectors):
        trial = rows + [list(v)]
        if rank(trial) > r:
            rows = trial
            r += 1
            kept.append(k)
    return kept


def coordinates(basis_cols, v):
    """Coordinates of v in the basis given by columns (list of column vectors)."""
    return solve(transpose(basis_cols), v)


def intersect_spaces(U, W):
    """Intersection of two subspaces given by lists of spanning vectors."""
    if not U or not W:
        return []
    n = len(U)
    M = transpose(list(U) + [[-x for x in w] for w in W])
    ker = nullspace(M)
    out = []
    for k in ker:
        vec = [sum((k[i] * U[i][j] for i in range(n)), Fraction(0)) for j in range(len(U[0]))]
        out.append(vec)
    return row_basis(out) if out else []


# ---------------------------------------------------------------- generic fields

def generic_rref(M, one):
    """RREF over any exact field whose elements support +,-,*,/ and is_zero."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    piv = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if not _is_zero(A[i][c])), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = one / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and not _is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    return A[:r], piv


def generic_nullspace(M, one, ncols=None):
    n = len(M[0]) if M else ncols
    zero = one * 0
    if not M:
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    R, piv = generic_rref(M, one)
    ps = set(piv)
    out = []
    for f in range(n):
        if f in ps:
            continue
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        out.append(v)
    return out


def generic_rank(M, one):
    if not M:
        return 0
    return len(generic_rref(M, one)[1])


def generic_det(M, one):
    A = [list(r) for r in M]
    n = len(A)
    d = one
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(A[i][c])), None)
        if p is None:
            return one * 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d = d * A[c][c]
        inv = one / A[c][c]
        for i in range(c + 1, n):
            if not _is_zero(A[i][c]):
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return d


def generic_inverse(M, one):
    n = len(M)
    zero = one * 0
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(M)]
    R, piv = generic_rref(aug, one)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise NotInvertible("singular matrix")
    return [row[n:] for row in R]


def generic_solve(A, b, one):
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = generic_rref(aug, one)
    if n in piv:
        raise ValueError("inconsistent linear system")
    x = [one * 0] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


# ---------------------------------------------------------------- restriction of scalars

def split_rows(M, q_coords):
    """Rows over an extension, unknowns rational: expand each row into its Q-components.

    ``q_coords`` maps a coefficient to its list of rational coordinates.
    """
    out = []
    for row in M:
        comps = [q_coords(x) for x in row]
        for k in range(len(comps[0]) if comps else 0):
            out.append([c[k] for c in comps])
    return out


def restrict_matrix(M, mult_matrix):
    """Q-matrix of an F-linear map given by an F-matrix, on the basis (v_j * basis_k).

    Index of (j, k) is j*d + k.
    """
    blocks = [[mult_matrix(x) for x in row] for row in M]
    d = len(blocks[0][0]) if blocks and blocks[0] else 0
    out = []
    for brow in blocks:
        for k in range(d):
            out.append([b[k][l] for b in brow for l in range(d)])
    return out


def to_rational_matrix(M):
    """Convert a matrix whose entries are rational-valued field elements."""
    return [[x.to_rational() if hasattr(x, "to_rational") else Fraction(x) for x in r] for r in M]


def kernel_over(M, field):
    """Nullspace over a number field, computed by restriction of scalars to Q.

    Entries of M are elements of ``field``; returns F-vectors.
    """
    n = len(M[0])
    d = field.degree
    Q = restrict_matrix(M, lambda x: field(x).mult_matrix())
    ker = nullspace(Q, n * d)
    vecs = [[field.element(v[j * d:(j + 1) * d]) for j in range(n)] for v in ker]
    if not vecs:
        return []
    # reduce the Q-basis of the kernel to an F-basis
    R, piv = generic_rref(vecs, field.one())
    return R


# ---------------------------------------------------------------- over an etale base

def _base_q_matrix(base, A):
    return restrict_matrix(A, base.mult_matrix)


def _base_q_vector(base, v):
    out = []
    for x in v:
        out.extend(base.q_coords(x))
    return out


def _base_from_q(base, v):
    d = base.degree
    return [base.from_q_coords(v[j * d:(j + 1) * d]) for j in range(len(v) // d)]


def base_solve(base, A, b):
    """Solve A x = b over an etale base by restriction of scalars."""
    return _base_from_q(base, solve(_base_q_matrix(base, A), _base_q_vector(base, b)))


def base_nullspace_q(base, A):
    """Rational basis of the kernel of an E-matrix, as E-vectors (a Q-basis of the kernel)."""
    ker = nullspace(_base_q_matrix(base, A))
    return [_base_from_q(base, v) for v in ker]


def base_rank_q(base, A):
    """Q-rank of the E-linear map A."""
    return rank(_base_q_matrix(base, A))


def base_inverse(base, A):
    n = len(A)
    Q = _base_q_matrix(base, A)
    if det(Q) == 0:
        raise NotInvertible("matrix is not invertible over the base")
    Qi = inverse(Q)
    d = base.degree
    out = [[None] * n for _ in range(n)]
    one_coords = base.q_coords(base.one())
    for j in range(n):
        for i in range(n):
            # column j*d.. of Qi applied to coords of 1 gives the (i, j) entry
            block = [[Qi[i * d + k][j * d + l] for l in range(d)] for k in range(d)]
            out[i][j] = base.from_q_coords(matvec(block, one_coords))
    return out
