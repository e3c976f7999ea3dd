"""Exact arithmetic in number fields and etale algebras over Q.

Polynomials are ascending coefficient lists.  A number field is Q[x]/(f) for a
monic irreducible f; elements are coefficient tuples in the power basis of the
generator.  Real embeddings are isolated with Sturm sequences, so nothing in
this module touches floating point.
"""

from fractions import Fraction
from functools import cached_property
import random

from .errors import InputError, NonMonic, ReduciblePolynomial


def rat(x):
    """Coerce int, Fraction or a "p/q" string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"cannot read {x!r} as a rational")


def fmt_rat(q):
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- polynomials

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_sub(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a, c):
    return poly_trim([c * x for x in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_divmod(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b):
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r.pop()
        r = poly_trim(r)
    return poly_trim(q), r


def poly_monic(a):
    a = poly_trim(a)
    return [x / a[-1] for x in a] if a else []


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = poly_trim(a), poly_trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    lead = r0[-1]
    return [x / lead for x in r0], [x / lead for x in s0], [x / lead for x in t0]


def poly_deriv(a):
    return poly_trim([i * a[i] for i in range(1, len(a))])


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_compose_eval(a, x, one):
    """Evaluate a rational polynomial at a ring element x (Horner)."""
    acc = one * 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_part(a):
    a = poly_trim(a)
    g = poly_gcd(a, poly_deriv(a))
    return poly_monic(poly_divmod(a, g)[0]) if len(g) > 1 else poly_monic(a)


def rational_roots(p):
    """Rational roots of a rational polynomial (rational-root screening)."""
    p = poly_trim([rat(c) for c in p])
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    roots = []
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints.pop(0)
    if len(ints) <= 1:
        return sorted(set(roots))
    a0, an = abs(ints[0]), abs(ints[-1])
    for num in _divisors(a0):
        for d in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, d)
                if poly_eval(ints, r) == 0:
                    roots.append(r)
    return sorted(set(roots))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            out.append(n // i)
        i += 1
    return sorted(set(out))


def is_irreducible(p):
    """Irreducibility over Q.

    A rational root certifies reducibility quickly; otherwise the decision is
    delegated to FLINT's factorization over Z.
    """
    p = poly_trim([rat(c) for c in p])
    deg = len(p) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if rational_roots(p):
        return False
    import flint

    fac = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p]).factor()[1]
    return len(fac) == 1 and fac[0][1] == 1


def factor_rational(p):
    """Monic irreducible factors of a rational polynomial, with multiplicity."""
    import flint

    p = poly_trim([rat(c) for c in p])
    out = []
    for f, m in flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p]).factor()[1]:
        coeffs = [rat(c) for c in f.coeffs()]
        out.append((poly_monic(coeffs), int(m)))
    return out


# ---------------------------------------------------------------- Sturm

def sturm_sequence(p):
    p = poly_trim([rat(c) for c in p])
    seq = [p, poly_deriv(p)]
    while seq[-1] and len(seq[-1]) > 1:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(poly_scale(r, -1))
    return [s for s in seq if s]


def _sign(x):
    return (x > 0) - (x < 0)


def sign_changes(seq, x):
    signs = [_sign(poly_eval(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, lo, hi):
    """Number of distinct real roots in (lo, hi] of a squarefree polynomial."""
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def root_bound(p):
    p = poly_monic([rat(c) for c in p])
    return 1 + max((abs(c) for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p):
    """Disjoint open rational intervals, one per real root, in increasing order."""
    p = squarefree_part([rat(c) for c in p])
    if len(p) == 2:
        r = -p[0]
        return [(r - 1, r + 1)]
    seq = sturm_sequence(p)
    m = root_bound(p)
    out = []
    stack = [(-m, m)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        k = 2
        while poly_eval(p, mid) == 0:
            k += 1
            mid = lo + (hi - lo) / k
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


# ---------------------------------------------------------------- number fields

class NumberField:
    """Q[x]/(min_poly) with min_poly monic irreducible (checked)."""

    def __init__(self, min_poly, generator="a"):
        coeffs = poly_trim([rat(c) for c in min_poly])
        if len(coeffs) < 2:
            raise InputError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise NonMonic(f"leading coefficient {coeffs[-1]} is not 1")
        if not is_irreducible(coeffs):
            raise ReduciblePolynomial("minimal polynomial factors over Q",
                                      {"min_poly": [fmt_rat(c) for c in coeffs]})
        self.min_poly = tuple(coeffs)
        self.generator_name = generator
        self.degree = len(coeffs) - 1
        d = self.degree
        # x^k reduced into the power basis, for k < 2d - 1
        pows = []
        for k in range(max(2 * d - 1, 1)):
            if k < d:
                v = [Fraction(0)] * d
                v[k] = Fraction(1)
            else:
                prev = pows[-1]
                v = [Fraction(0)] + list(prev[:-1])
                top = prev[-1]
                if top:
                    for i in range(d):
                        v[i] -= top * coeffs[i]
            pows.append(tuple(v))
        self._pows = pows

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.min_poly]})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.min_poly == self.min_poly

    def __hash__(self):
        return hash(("NumberField", self.min_poly))

    @property
    def factors(self):
        return [self]

    # -- element construction
    def element(self, coeffs):
        coeffs = [rat(c) for c in coeffs]
        if len(coeffs) > self.degree:
            return self._reduce(coeffs)
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise TypeError("element of a different field")
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        return self.element([rat(x)])

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def gen(self):
        if self.degree == 1:
            return self.element([-self.min_poly[0]])
        return self.element([0, 1])

    def _reduce(self, conv):
        d = self.degree
        out = [Fraction(0)] * d
        for k, c in enumerate(conv):
            if not c:
                continue
            if k < len(self._pows):
                row = self._pows[k]
            else:
                row = self._power_row(k)
            for i in range(d):
                if row[i]:
                    out[i] += c * row[i]
        return FieldElement(self, tuple(out))

    def _power_row(self, k):
        v = self._pows[-1]
        for _ in range(k - len(self._pows) + 1):
            top = v[-1]
            v = [Fraction(0)] + list(v[:-1])
            if top:
                for i in range(self.degree):
                    v[i] -= top * self.min_poly[i]
        return tuple(v)

    # -- Q-structure
    def q_basis(self):
        return [self.element([0] * j + [1]) for j in range(self.degree)]

    def q_coords(self, a):
        return list(self(a).c)

    def from_q_coords(self, vec):
        return self.element(vec)

    def trace(self, a):
        a = self(a)
        return sum((c * t for c, t in zip(a.c, self._trace_powers)), Fraction(0))

    def norm(self, a):
        return self(a).norm()

    def mult_matrix(self, a):
        return self(a).mult_matrix()

    def is_unit(self, a):
        return not self(a).is_zero()

    @cached_property
    def _trace_powers(self):
        d = self.degree
        out = []
        for j in range(d):
            t = Fraction(0)
            for i in range(d):
                conv = [Fraction(0)] * (i + j) + [Fraction(1)]
                t += self._reduce(conv).c[i]
            out.append(t)
        return out

    def random_element(self, rng, bound=3, nonzero=False):
        while True:
            a = self.element([Fraction(rng.randint(-bound, bound), rng.randint(1, 2))
                              for _ in range(self.degree)])
            if not (nonzero and a.is_zero()):
                return a

    # -- embeddings and classification
    @cached_property
    def real_embeddings(self):
        return [RealEmbedding(self, lo, hi) for lo, hi in isolate_real_roots(self.min_poly)]

    @cached_property
    def classification(self):
        return classify_field(self)

    def is_totally_real(self):
        return len(self.real_embeddings) == self.degree

    def conj(self, a):
        cl = self.classification
        if cl.kind == "totally_real":
            return self(a)
        if cl.kind != "cm":
            raise InputError("field has no CM conjugation")
        return cl.conj(a)

    def to_json(self):
        return {"generator": self.generator_name, "min_poly": [fmt_rat(c) for c in self.min_poly]}

    @classmethod
    def from_json(cls, obj):
        return cls([rat(c) for c in obj["min_poly"]], obj.get("generator", "a"))

    def base_change(self, ring_one):
        """The ring E (x) K where K is the parent of ``ring_one``."""
        return BaseChange(self, ring_one)


def make_number_field(min_poly, generator="a"):
    return NumberField(min_poly, generator)


RATIONALS = None


def rationals():
    global RATIONALS
    if RATIONALS is None:
        RATIONALS = NumberField([0, 1], "q")
    return RATIONALS


class FieldElement:
    __slots__ = ("field", "c")

    def __init__(self, field, coeffs):
        self.field = field
        self.c = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x * other for x in self.c))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        d = len(a)
        if d == 1:
            return FieldElement(self.field, (a[0] * b[0],))
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return self.field._reduce(conv)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if len(self.c) == 1:
            return FieldElement(self.field, (1 / self.c[0],))
        g, s, _ = poly_xgcd(poly_trim(list(self.c)), list(self.field.min_poly))
        return self.field.element(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x / other for x in self.c))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = []
        g = self.field.generator_name
        for k, x in enumerate(self.c):
            if x:
                terms.append(str(x) if k == 0 else f"{x}*{g}" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms) if terms else "0"

    def is_zero(self):
        return not any(self.c)

    def is_rational(self):
        return not any(self.c[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.c[0]

    def mult_matrix(self):
        """Matrix of multiplication by self on the power basis (columns = images)."""
        cols = [(self * b).c for b in self.field.q_basis()]
        d = len(cols)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def trace(self):
        return self.field.trace(self)

    def norm(self):
        from .linalg import det

        if len(self.c) == 1:
            return self.c[0]
        return det(self.mult_matrix())

    def minimal_polynomial(self):
        """Monic minimal polynomial over Q, by linear dependence of powers."""
        from .linalg import nullspace

        powers = [self.field.one()]
        while True:
            nxt = powers[-1] * self
            cols = [p.c for p in powers] + [nxt.c]
            mat = [[col[i] for col in cols] for i in range(len(self.c))]
            ker = nullspace(mat)
            if ker:
                v = ker[0]
                return poly_monic(v)
            powers.append(nxt)

    def apply(self, poly_coeffs):
        """Evaluate a polynomial with coefficients in this field at self."""
        acc = self.field.zero()
        for c in reversed(poly_coeffs):
            acc = acc * self + c
        return acc

    def to_json(self):
        return [fmt_rat(x) for x in self.c]


def substitute(a, image):
    """Apply the field map sending the generator of ``a.field`` to ``image``."""
    acc = image * 0
    for c in reversed(a.c):
        acc = acc * image + c
    return acc


# ---------------------------------------------------------------- base change

class BaseChange:
    """The ring E (x)_Q K = K[x]/(f_E) for a coefficient ring K."""

    def __init__(self, field, ring_one):
        self.field = field
        self.one_k = ring_one
        self.degree = field.degree

    def element(self, coeffs):
        z = self.one_k * 0
        coeffs = list(coeffs) + [z] * (self.degree - len(coeffs))
        return BCElement(self, tuple(coeffs))

    def embed(self, a):
        """Image of a field element a = sum a_j x^j (rational coefficients)."""
        return self.element([self.one_k * c for c in self.field(a).c])

    def scalar(self, k):
        return self.element([k])

    def one(self):
        return self.scalar(self.one_k)

    def zero(self):
        return self.scalar(self.one_k * 0)

    def idempotent(self, t):
        """Idempotent of E (x) K projecting onto the factor where x acts as t.

        ``t`` is a root of f_E in K; f_E = (X - t) h(X) and the idempotent is
        h(x)/h(t).
        """
        f = [self.one_k * c for c in self.field.min_poly]
        h, r = poly_divmod(f, [-t, self.one_k])
        if any(not (c == 0) for c in r):
            raise InputError("designated image is not a root of the minimal polynomial")
        ht = poly_eval(h, t)
        return self.element([c / ht for c in h])


class BCElement:
    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = coeffs

    def __add__(self, o):
        if not isinstance(o, BCElement):
            o = self.ring.scalar(self.ring.one_k * o)
        return BCElement(self.ring, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, BCElement):
            o = self.ring.scalar(self.ring.one_k * o)
        return BCElement(self.ring, tuple(x - y for x, y in zip(self.c, o.c)))

    def __neg__(self):
        return BCElement(self.ring, tuple(-x for x in self.c))

    def __mul__(self, o):
        if not isinstance(o, BCElement):
            return BCElement(self.ring, tuple(x * o for x in self.c))
        d = self.ring.degree
        z = self.ring.one_k * 0
        conv = [z] * (2 * d - 1)
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            for j, y in enumerate(o.c):
                if y == 0:
                    continue
                conv[i + j] = conv[i + j] + x * y
        pows = self.ring.field._pows
        out = [z] * d
        for k, c in enumerate(conv):
            if c == 0:
                continue
            row = pows[k]
            for i in range(d):
                if row[i]:
                    out[i] = out[i] + c * row[i]
        return BCElement(self.ring, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, k):
        return BCElement(self.ring, tuple(x / k for x in self.c))

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def __eq__(self, o):
        if isinstance(o, BCElement):
            return self.c == o.c
        return NotImplemented

    __hash__ = None


# ---------------------------------------------------------------- real embeddings

def _interval_mul(a, b):
    ps = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return (min(ps), max(ps))


def interval_eval(p, lo, hi):
    """Enclosure of p([lo, hi]) by interval Horner."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _interval_mul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


class RealEmbedding:
    """A real root of the field's minimal polynomial, held as an isolating interval."""

    def __init__(self, field, lo, hi):
        lo, hi = rat(lo), rat(hi)
        if not lo < hi:
            raise InputError("isolating interval needs lo < hi")
        self.field = field
        self.lo = lo
        self.hi = hi

    @property
    def isolating_interval(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return f"RealEmbedding({self.field!r}, ({self.lo}, {self.hi}))"

    def __eq__(self, other):
        if not isinstance(other, RealEmbedding) or other.field != self.field:
            return False
        return self.lo < other.hi and other.lo < self.hi and self._same_root(other)

    def __hash__(self):
        return hash(self.field)

    def _same_root(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        seq = sturm_sequence(squarefree_part(self.field.min_poly))
        if self.field.degree == 1:
            r = -self.field.min_poly[0]
            return lo < r < hi
        return count_roots(seq, lo, hi) + (1 if poly_eval(self.field.min_poly, lo) == 0 else 0) >= 1 and \
            count_roots(seq, self.lo, self.hi) == 1

    def refine(self, width):
        """Return an equivalent embedding whose interval is narrower than ``width``."""
        width = rat(width)
        p = self.field.min_poly
        if self.field.degree == 1:
            r = -p[0]
            return RealEmbedding(self.field, r - width / 3, r + width / 3)
        lo, hi = self.lo, self.hi
        seq = sturm_sequence(p)
        while hi - lo >= width:
            mid = (lo + hi) / 2
            if poly_eval(p, mid) == 0:
                return RealEmbedding(self.field, mid - width / 3, mid + width / 3)
            if count_roots(seq, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return RealEmbedding(self.field, lo, hi)

    def enclose(self, a, width):
        """Rational interval of width < ``width`` containing the image of a."""
        a = self.field(a)
        coeffs = list(a.c)
        w = self.hi - self.lo
        emb = self
        while True:
            lo, hi = interval_eval(coeffs, emb.lo, emb.hi)
            if hi - lo < width:
                return lo, hi
            w = w / 4
            emb = emb.refine(w)

    def sign(self, a):
        return sign_at(self, a)

    def to_json(self):
        return [fmt_rat(self.lo), fmt_rat(self.hi)]


def real_embeddings(field):
    return list(field.real_embeddings)


def sign_at(emb, a):
    """Exact sign of the image of a under a real embedding."""
    field = emb.field
    a = field(a)
    if a.is_zero():
        return 0
    g = poly_trim(list(a.c))
    if len(g) == 1:
        return _sign(g[0])
    # a != 0 in the field, so gcd(g, min_poly) = 1 and g has no root at the embedding;
    # shrink the interval until g has no root in it.
    assert len(poly_gcd(g, list(field.min_poly))) == 1
    gs = squarefree_part(g)
    seq = sturm_sequence(gs)
    e = emb
    while True:
        if poly_eval(gs, e.lo) != 0 and count_roots(seq, e.lo, e.hi) == 0:
            return _sign(poly_eval(g, e.lo))
        e = e.refine((e.hi - e.lo) / 2)


# ---------------------------------------------------------------- factoring over fields

def _sympy_domain(field):
    cache = field.__dict__.get("_sympy_domain")
    if cache is not None:
        return cache
    import sympy

    x = sympy.Symbol("x")
    f = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(field.min_poly)], x)
    if field.degree == 1:
        dom = sympy.QQ
    else:
        dom = sympy.QQ.algebraic_field(sympy.AlgebraicNumber(sympy.CRootOf(f, 0)))
        mod = [rat(c) for c in dom.mod.to_list()]
        if mod != list(reversed(field.min_poly)):
            raise RuntimeError("sympy chose a different presentation of the field")
    field.__dict__["_sympy_domain"] = dom
    return dom


def _to_sympy(field, dom, a):
    import sympy

    if field.degree == 1:
        return dom.convert(sympy.Rational(a.c[0].numerator, a.c[0].denominator))
    coeffs = [dom.dom(c.numerator, c.denominator) for c in reversed(poly_trim(list(a.c)) or [Fraction(0)])]
    return dom.dtype(coeffs, dom.mod.to_list(), dom.dom)


def _from_sympy(field, c):
    if field.degree == 1:
        return field.element([rat(c)])
    return field.element([rat(q) for q in reversed(c.to_list())])


def factor_over(field, poly):
    """Monic irreducible factors over ``field`` of a polynomial with coefficients in it.

    Returns a list of (factor, multiplicity) with factors as ascending lists of
    field elements.
    """
    import sympy

    dom = _sympy_domain(field)
    x = sympy.Symbol("x")
    coeffs = [field(c) for c in poly]
    p = sympy.Poly.from_list([_to_sympy(field, dom, c) for c in reversed(coeffs)], x, domain=dom)
    out = []
    for fac, m in p.factor_list()[1]:
        rep = [_from_sympy(field, c) for c in reversed(fac.rep.to_list())]
        lead = rep[-1]
        out.append(([c / lead for c in rep], m))
    return out


def roots_in(field, poly):
    """Roots in ``field`` of a polynomial with rational or field coefficients."""
    roots = []
    for fac, _ in factor_over(field, poly):
        if len(fac) == 2:
            roots.append(-fac[0])
    return roots


def automorphisms(field):
    """Images of the generator under all field automorphisms (identity first)."""
    gen = field.gen()
    roots = roots_in(field, list(field.min_poly))
    roots.sort(key=lambda r: (r != gen, r.c))
    return roots


# ---------------------------------------------------------------- classification

class FieldClassification:
    def __init__(self, kind, subfield_min_poly=None, conjugation=None, subfield_generator=None):
        self.kind = kind
        self.subfield_min_poly = subfield_min_poly
        self.conjugation = conjugation          # image of the generator
        self.subfield_generator = subfield_generator

    def conj(self, a):
        return substitute(a, self.conjugation) if self.conjugation is not None else a

    def __repr__(self):
        return f"FieldClassification({self.kind})"


def classify_field(field):
    """TotallyReal, CM (with totally real subfield and conjugation) or Neither."""
    nreal = len(field.real_embeddings)
    if nreal == field.degree:
        return FieldClassification("totally_real")
    if nreal > 0 or field.degree % 2:
        return FieldClassification("neither")
    gen = field.gen()
    for img in automorphisms(field)[1:]:
        if substitute(img, img) != gen:
            continue
        for cand in _fixed_candidates(gen, img):
            mp = cand.minimal_polynomial()
            if len(mp) - 1 != field.degree // 2:
                continue
            if len(isolate_real_roots(mp)) == len(mp) - 1:
                return FieldClassification("cm", mp, img, cand)
            break
    return FieldClassification("neither")


def _fixed_candidates(gen, img):
    yield gen + img
    yield gen * img
    a = gen
    for k in range(2, 2 * gen.field.degree + 2):
        a = a * gen + k
        yield a + substitute(a, img)


# ---------------------------------------------------------------- extensions

class Extension:
    """A simple extension L = K[s]/(g) presented as an absolute number field."""

    def __init__(self, base, poly, field, base_image, root, tower_matrix):
        self.base = base
        self.poly = poly
        self.field = field
        self.base_image = base_image      # image of the base generator in L
        self.root = root                  # image of s in L
        self._tower = tower_matrix        # columns: tower coords of t^j

    def embed(self, a):
        return substitute(self.base(a), self.base_image)

    def to_tower(self, z):
        """Coefficients (in K) of z as a polynomial in s."""
        from .linalg import solve

        db = self.base.degree
        coords = solve(self._tower, list(self.field(z).c))
        m = len(self.poly) - 1
        return [self.base.element(coords[k * db:(k + 1) * db]) for k in range(m)]

    def from_tower(self, coeffs):
        acc = self.field.zero()
        for c in reversed(coeffs):
            acc = acc * self.root + self.embed(c)
        return acc


def _tower_mul(a, b, g, zero):
    prod = poly_mul(a, b) if a and b else []
    if not prod:
        return []
    return poly_divmod(prod, g)[1]


def simple_extension(base, poly, generator="t"):
    """Adjoin a root of the monic irreducible ``poly`` (coefficients in ``base``)."""
    from .linalg import solve

    g = [base(c) for c in poly]
    g = [c / g[-1] for c in g]
    m = len(g) - 1
    db = base.degree
    n = m * db
    zero = base.zero()

    def coords(tp):
        tp = list(tp) + [zero] * (m - len(tp))
        out = []
        for c in tp:
            out.extend(c.c)
        return out

    for k in range(0, 50):
        # t = s + k * theta
        t = [base.element([0]) + (k * base.gen() if db > 1 else 0), base.one()] if m >= 1 else []
        t = poly_trim(t)
        powers = [[base.one()]]
        for _ in range(n):
            powers.append(_tower_mul(powers[-1], t, g, zero))
        mat = [[coords(p)[i] for p in powers] for i in range(n)]
        from .linalg import nullspace

        ker = nullspace(mat)
        if len(ker) != 1 or ker[0][-1] == 0:
            continue
        mp = poly_monic(ker[0])
        if len(mp) - 1 != n or not is_irreducible(mp):
            if len(mp) - 1 == n:
                raise InputError("polynomial is reducible over the base field")
            continue
        field = NumberField(mp, generator)
        sq = [[row[j] for j in range(n)] for row in mat]
        base_img = field.element(solve(sq, coords([base.gen()]))) if db > 1 else field.element([base.gen().c[0]])
        root = field.element(solve(sq, coords([zero, base.one()])))
        return Extension(base, g, field, base_img, root, sq)
    raise InputError("no primitive element found")


def adjoin_sqrt(base, c, generator="t"):
    return simple_extension(base, [-base(c), base.zero(), base.one()], generator)


def galois_closure(fields, limit=48):
    """Galois closure L of a list of number fields.

    Returns (L, roots, autos): ``roots[k]`` lists the images of the k-th
    field's generator under all embeddings into L; ``autos`` are the images of
    L's generator under Gal(L/Q).
    """
    current = fields[0]
    changed = True
    while changed:
        changed = False
        for f in fields + [current]:
            for fac, _ in factor_over(current, list(f.min_poly)):
                if len(fac) > 2:
                    current = simple_extension(current, fac).field
                    if current.degree > limit:
                        raise InputError("Galois closure too large for desk scale")
                    changed = True
                    break
            if changed:
                break
    roots = [roots_in(current, list(f.min_poly)) for f in fields]
    return current, roots, automorphisms(current)


# ---------------------------------------------------------------- etale algebras

class EtaleAlgebra:
    """A finite product of number fields with componentwise arithmetic."""

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise InputError("etale algebra needs at least one factor")
        self.factors = factors
        self.total_degree = sum(f.degree for f in factors)
        self.degree = self.total_degree

    def __eq__(self, other):
        return isinstance(other, EtaleAlgebra) and other.factors == self.factors

    def __hash__(self):
        return hash(tuple(self.factors))

    def __repr__(self):
        return f"EtaleAlgebra({self.factors!r})"

    def element(self, comps):
        return EtaleElement(self, tuple(f(c) for f, c in zip(self.factors, comps)))

    def __call__(self, x):
        if isinstance(x, EtaleElement):
            return x
        if isinstance(x, (list, tuple)):
            return self.element(x)
        return self.element([x] * len(self.factors))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def idempotent(self, k):
        return self.element([1 if i == k else 0 for i in range(len(self.factors))])

    def q_basis(self):
        out = []
        for k, f in enumerate(self.factors):
            for b in f.q_basis():
                out.append(self.element([b if i == k else 0 for i in range(len(self.factors))]))
        return out

    def q_coords(self, a):
        a = self(a)
        out = []
        for x in a.comps:
            out.extend(x.c)
        return out

    def from_q_coords(self, vec):
        comps, pos = [], 0
        for f in self.factors:
            comps.append(f.element(vec[pos:pos + f.degree]))
            pos += f.degree
        return EtaleElement(self, tuple(comps))

    def trace(self, a):
        return sum((f.trace(x) for f, x in zip(self.factors, self(a).comps)), Fraction(0))

    def norm(self, a):
        out = Fraction(1)
        for x in self(a).comps:
            out *= x.norm()
        return out

    def mult_matrix(self, a):
        cols = [self.q_coords(self(a) * b) for b in self.q_basis()]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def is_unit(self, a):
        return all(not x.is_zero() for x in self(a).comps)

    def conj(self, a):
        return EtaleElement(self, tuple(f.conj(x) for f, x in zip(self.factors, self(a).comps)))

    def random_element(self, rng, bound=3, nonzero=False):
        return EtaleElement(self, tuple(f.random_element(rng, bound, nonzero) for f in self.factors))

    def to_json(self):
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, obj):
        return cls([NumberField.from_json(f) for f in obj["factors"]])


class EtaleElement:
    __slots__ = ("alg", "comps")

    def __init__(self, alg, comps):
        self.alg = alg
        self.comps = comps

    def _co(self, o):
        if isinstance(o, EtaleElement):
            return o
        if isinstance(o, (int, Fraction)):
            return self.alg(o)
        return NotImplemented

    def __add__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return EtaleElement(self.alg, tuple(x + y for x, y in zip(self.comps, o.comps)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return EtaleElement(self.alg, tuple(x - y for x, y in zip(self.comps, o.comps)))

    def __rsub__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return EtaleElement(self.alg, tuple(-x for x in self.comps))

    def __mul__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return EtaleElement(self.alg, tuple(x * y for x, y in zip(self.comps, o.comps)))

    __rmul__ = __mul__

    def inverse(self):
        return EtaleElement(self.alg, tuple(x.inverse() for x in self.comps))

    def __truediv__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._co(o) * self.inverse()

    def __eq__(self, o):
        if isinstance(o, EtaleElement):
            return self.comps == o.comps
        if isinstance(o, (int, Fraction)):
            return all(x == o for x in self.comps)
        return NotImplemented

    def __hash__(self):
        return hash(self.comps)

    def is_zero(self):
        return all(x.is_zero() for x in self.comps)

    def __repr__(self):
        return "(" + ", ".join(repr(x) for x in self.comps) + ")"

    def to_json(self):
        return [x.to_json() for x in self.comps]


def as_etale(base):
    return base if isinstance(base, EtaleAlgebra) else EtaleAlgebra([base])


# ---------------------------------------------------------------- dual numbers

class Dual:
    """a + b*eps with eps^2 = 0, over any commutative coefficient ring."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    def _co(self, o):
        return o if isinstance(o, Dual) else Dual(o, 0)

    def __add__(self, o):
        o = self._co(o)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        return Dual(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return self._co(o) - self

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __mul__(self, o):
        if not isinstance(o, Dual):
            return Dual(self.a * o, self.b * o)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Dual):
            return Dual(self.a / o, self.b / o)
        inv = 1 / o.a
        return Dual(self.a * inv, (self.b * o.a - self.a * o.b) * inv * inv)

    def __eq__(self, o):
        o = self._co(o)
        return self.a == o.a and self.b == o.b

    __hash__ = None

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r})"


class DualNumberRing:
    def __init__(self, base=None):
        self.base = base

    def element(self, a, b=0):
        return Dual(a, b)

    def eps(self):
        one = self.base.one() if self.base is not None else Fraction(1)
        return Dual(one * 0, one)


# ---------------------------------------------------------------- complex pairs

class Gaussian:
    """a + b*i over a real coefficient field (Fractions or real number field elements)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re
        self.im = im

    def _co(self, o):
        return o if isinstance(o, Gaussian) else Gaussian(o, 0)

    def __add__(self, o):
        o = self._co(o)
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._co(o) - self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __mul__(self, o):
        if not isinstance(o, Gaussian):
            return Gaussian(self.re * o, self.im * o)
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, o):
        if not isinstance(o, Gaussian):
            return Gaussian(self.re / o, self.im / o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._co(o) * self.inverse()

    def __eq__(self, o):
        o = self._co(o)
        return self.re == o.re and self.im == o.im

    __hash__ = None

    def __repr__(self):
        return f"({self.re!r}) + ({self.im!r})i"


def random_rational(rng, bound=5):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def seeded(seed):
    return random.Random(seed)
