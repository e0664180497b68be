"""Exact scalars, bigraded sparse polynomials and matrices over them.

The ambient ring is always a polynomial ring k[x_1..x_n, y_1..y_m] over an
exact field (Q or F_p); a quotient base k[y]/J is represented by carrying
the base relations J in the ring context and adjoining them to every
submodule computation downstream.  Fiber degree is total degree in the x
variables, base degree total degree in the y variables.
"""

from fractions import Fraction

from . import kernel as K
from .errors import ContextMismatchError, GstabError

ORDER_CODES = {"drl": K.ORDER_DRL, "lex": K.ORDER_LEX, "block": K.ORDER_BLOCK}


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Coefficient field: exact rationals (p == 0) or F_p, p prime."""

    def __init__(self, p=0):
        if p and not _is_prime(p):
            raise GstabError("modulus %d is not prime" % p)
        if p >= 1 << 62:
            raise GstabError("modulus must fit in a machine word")
        self.p = p

    def coeff(self, x):
        """Normalize x to a raw coefficient (Fraction, or int in [0, p))."""
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def scalar(self, x):
        return FieldScalar(self, self.coeff(x))

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else "GF(%d)" % self.p


def QQ():
    return Field(0)


def GF(p):
    return Field(p)


class FieldScalar:
    """Tagged exact field element.

    Rationals are kept in lowest terms with positive denominator (Fraction
    guarantees this); prime-field residues lie in [0, p).
    """

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        if field.p:
            if not isinstance(value, int) or not 0 <= value < field.p:
                raise GstabError("residue %r out of range for %r" % (value, field))
        elif not isinstance(value, Fraction):
            raise GstabError("rational scalar must be a Fraction")
        self.field = field
        self.value = value

    @property
    def variant(self):
        return "prime-field" if self.field.p else "rational"

    def _bin(self, other, op):
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise ContextMismatchError("scalars over different fields")
            other = other.value
        else:
            other = self.field.coeff(other)
        return FieldScalar(self.field, self.field.coeff(op(self.value, other)))

    def __add__(self, other):
        return self._bin(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._bin(other, lambda a, b: a * b)

    def __sub__(self, other):
        return self._bin(other, lambda a, b: a - b)

    def __truediv__(self, other):
        if self.field.p:
            return self._bin(other, lambda a, b: a * pow(b, -1, self.field.p))
        return self._bin(other, lambda a, b: a / b)

    def __eq__(self, other):
        return (isinstance(other, FieldScalar) and self.field == other.field
                and self.value == other.value)

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return "FieldScalar(%r, %r)" % (self.field, self.value)


class RingContext:
    """Variable layout, base relations and monomial order for one ring.

    Exponent vectors list the fiber variables first.  The default block
    order (fiber block before base block, degrevlex inside each) makes
    elimination of the fiber variables respect the fiber grading.
    """

    def __init__(self, field, fiber_vars=(), base_vars=(), base_rels=(), order="block"):
        fiber_vars = tuple(fiber_vars)
        base_vars = tuple(base_vars)
        names = fiber_vars + base_vars
        if len(set(names)) != len(names):
            raise GstabError("variable names must be distinct")
        if order not in ORDER_CODES:
            raise GstabError("unknown monomial order %r" % (order,))
        self.field = field
        self.fiber_vars = fiber_vars
        self.base_vars = base_vars
        self.order = order
        self.order_code = ORDER_CODES[order]
        self.n = len(fiber_vars)
        self.m = len(base_vars)
        self.nvars = self.n + self.m
        self._index = {nm: i for i, nm in enumerate(names)}
        rels = []
        for f in base_rels:
            terms = f.terms if isinstance(f, BiPoly) else dict(f)
            for e in terms:
                if any(e[:self.n]):
                    raise GstabError("base relations must involve only base variables")
            rels.append(terms)
        self.base_rels = tuple(rels)
        for terms in self.base_rels:
            if self.poly(terms).bidegree() is None:
                raise GstabError("base relations must be homogeneous in the base degree")

    @property
    def p(self):
        return self.field.p

    def var_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise GstabError("unknown variable %r" % (name,)) from None

    def names(self):
        return self.fiber_vars + self.base_vars

    def fiber_deg(self, e):
        return K.mono_block_deg(e, 0, self.n)

    def base_deg(self, e):
        return K.mono_block_deg(e, self.n, self.nvars)

    def bideg(self, e):
        return (self.fiber_deg(e), self.base_deg(e))

    def poly(self, terms):
        if isinstance(terms, BiPoly):
            if terms.ring != self:
                raise ContextMismatchError("polynomial from another ring")
            return terms
        clean = {}
        for e, c in dict(terms).items():
            c = self.field.coeff(c)
            if c:
                clean[tuple(e)] = c
        return BiPoly(self, clean)

    def zero(self):
        return BiPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field.coeff(c)
        return BiPoly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name):
        i = self.var_index(name)
        e = [0] * self.nvars
        e[i] = 1
        return BiPoly(self, {tuple(e): self.field.one})

    def monomial(self, e):
        return BiPoly(self, {tuple(e): self.field.one})

    def base_context(self):
        """The base ring as its own context (no fiber variables)."""
        return RingContext(self.field, (), self.base_vars,
                           [{e[self.n:]: c for e, c in terms.items()} for terms in self.base_rels],
                           order=self.order)

    def extend_base(self, new_names):
        """Adjoin degree-(0,0)-style auxiliary variables to the base block."""
        ctx = RingContext(self.field, self.fiber_vars, self.base_vars + tuple(new_names),
                          (), order=self.order)
        pad = (0,) * len(new_names)
        rels = [{e + pad: c for e, c in terms.items()} for terms in self.base_rels]
        ctx.base_rels = tuple(rels)
        return ctx

    def promote(self, poly, target):
        """Re-express a polynomial of this ring in an extended context."""
        if poly.ring != self:
            raise ContextMismatchError("polynomial from another ring")
        pad = (0,) * (target.nvars - self.nvars)
        if target.names()[: self.nvars] != self.names():
            raise GstabError("target context does not extend this one")
        return BiPoly(target, {e + pad: c for e, c in poly.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, RingContext)
                and self.field == other.field
                and self.fiber_vars == other.fiber_vars
                and self.base_vars == other.base_vars
                and self.order == other.order
                and canonical_rels(self) == canonical_rels(other))

    def __hash__(self):
        return hash((self.field, self.fiber_vars, self.base_vars, self.order))

    def __repr__(self):
        base = "".join(",%s" % v for v in self.base_vars)
        quot = "/J" if self.base_rels else ""
        return "%r[%s%s]%s" % (self.field, ",".join(self.fiber_vars), base, quot)


def canonical_rels(ring):
    return tuple(tuple(sorted(t.items())) for t in ring.base_rels)


class BiPoly:
    """Sparse polynomial with the bigrading (fiber degree, base degree).

    Instances are immutable; every operation returns a fresh normalized
    polynomial with no stored zero coefficients.
    """

    __slots__ = ("ring", "terms", "_bideg")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._bideg = False  # not computed yet

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            if other.ring != self.ring:
                raise ContextMismatchError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return BiPoly(self.ring, K.poly_add(self.terms, other.terms, self.ring.p))

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.ring, K.poly_neg(self.terms, self.ring.p))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return BiPoly(self.ring, K.poly_mul(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise GstabError("negative powers are not supported")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        return BiPoly(self.ring, K.poly_scale(self.terms, self.ring.field.coeff(c), self.ring.p))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            other = self._coerce(other)
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted(self.terms.items()))))

    def bidegree(self):
        """Common (fiber, base) bidegree, or None when inhomogeneous/zero."""
        if self._bideg is False:
            degs = {self.ring.bideg(e) for e in self.terms}
            self._bideg = degs.pop() if len(degs) == 1 else None
        return self._bideg

    def is_bihomogeneous(self):
        return not self.terms or self.bidegree() is not None

    def total_deg(self):
        return max((K.mono_deg(e) for e in self.terms), default=0)

    def lead(self):
        """(monomial, coeff) of the lead term in the ring order."""
        if not self.terms:
            return None
        ring = self.ring
        e = max(self.terms, key=lambda t: K.mono_key(t, ring.order_code, ring.n))
        return e, self.terms[e]

    def coefficients(self):
        return list(self.terms.values())

    def substitute(self, images):
        """Substitute variables; `images` maps variable index -> BiPoly.

        Unlisted variables map to themselves in the target ring (which is
        the ring of the image polynomials).
        """
        target = next(iter(images.values())).ring if images else self.ring
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                img = images.get(i)
                if img is None:
                    img = target.var(self.ring.names()[i])
                term = term * img ** k
            out = out + term
        return out

    def __repr__(self):
        return poly_str(self)


def poly_str(f):
    if not f.terms:
        return "0"
    ring = f.ring
    names = ring.names()
    bits = []
    for e in sorted(f.terms, key=lambda t: K.mono_key(t, ring.order_code, ring.n), reverse=True):
        c = f.terms[e]
        factors = ["%s^%d" % (names[i], k) if k > 1 else names[i]
                   for i, k in enumerate(e) if k]
        mono = "*".join(factors)
        if not mono:
            bits.append(str(c))
        elif c == ring.field.one:
            bits.append(mono)
        else:
            bits.append("%s*%s" % (c, mono))
    return " + ".join(bits).replace("+ -", "- ")


# ------------------------------------------------------------------ vectors

def vec_bidegree(ring, vec, row_twists):
    """Common bidegree of a vector in a twisted free module, else None."""
    degs = set()
    for (pos, e), _c in vec.items():
        f, b = ring.bideg(e)
        tf, tb = row_twists[pos]
        degs.add((f + tf, b + tb))
        if len(degs) > 1:
            return None
    return degs.pop() if degs else None


def vec_entry_poly(ring, vec, row):
    return BiPoly(ring, {e: c for (pos, e), c in vec.items() if pos == row})


def vec_from_entries(ring, entries):
    """Build a vector dict from {row: BiPoly}."""
    out = {}
    for pos, f in entries.items():
        for e, c in f.terms.items():
            out[(pos, e)] = c
    return out


def canonical_vec(vec):
    return tuple(sorted(vec.items()))


class PolyMatrix:
    """Matrix of polynomials as a list of column vectors.

    Row and column twists record generator bidegrees; in graded mode every
    entry is zero or bihomogeneous of bidegree (column twist) - (row twist).
    """

    def __init__(self, ring, nrows, row_twists, cols, col_twists, graded=True):
        self.ring = ring
        self.nrows = nrows
        self.row_twists = list(row_twists) if row_twists is not None else None
        self.cols = [dict(c) for c in cols]
        self.col_twists = list(col_twists) if col_twists is not None else None
        self.graded = graded
        if graded:
            self._validate()

    def _validate(self):
        if self.row_twists is None or self.col_twists is None:
            raise GstabError("graded matrix needs twists")
        if len(self.row_twists) != self.nrows or len(self.col_twists) != len(self.cols):
            raise GstabError("twist lists do not match the matrix shape")
        for j, col in enumerate(self.cols):
            for (pos, e), c in col.items():
                if not 0 <= pos < self.nrows:
                    raise GstabError("row index out of range")
                f, b = self.ring.bideg(e)
                tf, tb = self.row_twists[pos]
                cf, cb = self.col_twists[j]
                if (f + tf, b + tb) != (cf, cb):
                    raise GstabError(
                        "entry (%d,%d) has bidegree (%d|%d), expected (%d|%d)"
                        % (pos, j, f, b, cf - tf, cb - tb))

    @property
    def ncols(self):
        return len(self.cols)

    def entry(self, i, j):
        return vec_entry_poly(self.ring, self.cols[j], i)

    def column(self, j):
        return dict(self.cols[j])

    def apply(self, vec):
        """Image of a vector (indexed by columns) under this matrix."""
        p = self.ring.p
        out = {}
        for (pos, e), c in vec.items():
            out = K.vec_add(out, K.vec_term_mul(self.cols[pos], c, e, p), p)
        return out

    def compose(self, other):
        """self @ other (apply other first)."""
        cols = [self.apply(c) for c in other.cols]
        return PolyMatrix(self.ring, self.nrows, self.row_twists, cols,
                          other.col_twists, graded=self.graded and other.graded)

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for (pos, e), c in col.items():
                cols[pos][(j, e)] = c
        rt = [(-f, -b) for (f, b) in self.col_twists] if self.col_twists is not None else None
        ct = [(-f, -b) for (f, b) in self.row_twists] if self.row_twists is not None else None
        return PolyMatrix(self.ring, self.ncols, rt, cols, ct, graded=self.graded)

    def is_zero(self):
        return all(not c for c in self.cols)

    def canonical(self):
        return (self.nrows, tuple(map(tuple, self.row_twists or [])),
                tuple(map(tuple, self.col_twists or [])),
                tuple(canonical_vec(c) for c in self.cols))

    def __repr__(self):
        return "PolyMatrix(%dx%d over %r)" % (self.nrows, self.ncols, self.ring)
