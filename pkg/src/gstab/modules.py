"""Finitely presented (bi)graded modules and submodule machinery.

A module is a cokernel presentation: a twisted free module F modulo the
image of a relation matrix.  Over a quotient base k[y]/J the base
relations are adjoined to the relation columns automatically, so all
Groebner computations run over the ambient polynomial ring.

Grading modes: "bigraded" validates both degrees, "fiber" only the fiber
degree (used after monomial localizations coarsen the base grading),
"none" skips twist bookkeeping entirely.
"""

import itertools
from fractions import Fraction

from . import kernel as K
from .core import PolyMatrix, vec_bidegree
from .errors import GstabError, ScopeError, TripwireError
from .groebner import Budget, buchberger, syzygies


def _one(p):
    return 1 if p else Fraction(1)


class ModulePresentation:
    """coker( relations -> twisted free module )."""

    def __init__(self, ring, gen_twists, rel_cols, graded="bigraded",
                 adjoin_base_rels=True):
        self.ring = ring
        self.graded = graded
        self.gen_twists = [tuple(t) for t in gen_twists] if graded != "none" else list(gen_twists)
        self.rank = len(gen_twists)
        cols = [dict(c) for c in rel_cols if c]
        if adjoin_base_rels and ring.base_rels:
            for pos in range(self.rank):
                for rel in ring.base_rels:
                    cols.append({(pos, e): c for e, c in rel.items()})
        self.rel_cols = cols
        self.col_twists = None
        if graded == "bigraded":
            self.col_twists = []
            for c in cols:
                bd = vec_bidegree(ring, c, self.gen_twists)
                if bd is None:
                    raise GstabError("relation column is not bihomogeneous")
                self.col_twists.append(bd)
        elif graded == "fiber":
            self.col_twists = []
            for c in cols:
                degs = {ring.fiber_deg(e) + self.gen_twists[pos][0] for (pos, e) in c}
                if len(degs) != 1:
                    raise GstabError("relation column is not fiber-homogeneous")
                self.col_twists.append((degs.pop(), 0))
        self._gb = None
        self._cache = {}

    # -- basic structure -------------------------------------------------

    def rel_matrix(self):
        return PolyMatrix(self.ring, self.rank, self.gen_twists, self.rel_cols,
                          self.col_twists, graded=self.graded == "bigraded")

    def gb(self, budget=None):
        if self._gb is None:
            self._gb = buchberger(self.ring, self.rel_cols, self.rank, budget=budget)
        return self._gb

    def contains(self, vec, budget=None):
        """Membership of a free-module vector in the relation submodule."""
        return self.gb(budget).contains(vec, budget)

    def reduce(self, vec, budget=None):
        return self.gb(budget).normal_form(vec, budget)

    def is_zero(self, budget=None):
        if self.rank == 0:
            return True
        zero = (0,) * self.ring.nvars
        one = _one(self.ring.p)
        return all(self.contains({(i, zero): one}, budget) for i in range(self.rank))

    def min_fiber_twist(self):
        return min((t[0] for t in self.gen_twists), default=0)

    def max_fiber_twist(self):
        return max((t[0] for t in self.gen_twists), default=0)

    def shifted(self, delta):
        """Same module with delta added to every generator bidegree."""
        df, db = delta
        tw = [(f + df, b + db) for (f, b) in self.gen_twists]
        return ModulePresentation(self.ring, tw, self.rel_cols, graded=self.graded,
                                  adjoin_base_rels=False)

    def direct_sum(self, other):
        if other.ring != self.ring:
            raise GstabError("direct sum needs a common ring")
        tw = list(self.gen_twists) + list(other.gen_twists)
        cols = [dict(c) for c in self.rel_cols]
        off = self.rank
        for c in other.rel_cols:
            cols.append({(pos + off, e): v for (pos, e), v in c.items()})
        return ModulePresentation(self.ring, tw, cols, graded=self.graded,
                                  adjoin_base_rels=False)

    def canonical(self):
        from .core import canonical_rels, canonical_vec
        return (repr(self.ring.field), self.ring.fiber_vars, self.ring.base_vars,
                canonical_rels(self.ring), self.ring.order,
                tuple(map(tuple, self.gen_twists)) if self.graded != "none" else None,
                tuple(sorted(canonical_vec(c) for c in self.rel_cols)))

    def __repr__(self):
        return "ModulePresentation(rank %d, %d relations over %r)" % (
            self.rank, len(self.rel_cols), self.ring)

    # -- invariant-style helpers ----------------------------------------

    def annihilator(self, budget=None):
        """Generators of ann(M) = intersection of (relations : e_i)."""
        key = "ann"
        if key not in self._cache:
            if self.rank == 0:
                self._cache[key] = [self.ring.one().terms]
            else:
                zero = (0,) * self.ring.nvars
                one = _one(self.ring.p)
                cur = None
                for i in range(self.rank):
                    ci = colon_ideal(self.ring, self.rel_cols, self.rank,
                                     {(i, zero): one}, budget)
                    cur = ci if cur is None else ideal_intersection(self.ring, cur, ci, budget)
                self._cache[key] = cur
        return [dict(t) for t in self._cache[key]]

    def slice_k_dimension(self, bidegree):
        """dim_k of one bidegree slice (needs bigraded or fiber-with-m=0)."""
        if self.graded == "none":
            raise GstabError("slice dimension needs a graded presentation")
        ring = self.ring
        target = tuple(bidegree)
        basis = {}
        for j, t in enumerate(self.gen_twists):
            need = (target[0] - t[0], target[1] - t[1])
            for e in monomials_of_bidegree(ring, need):
                basis[(j, e)] = len(basis)
        if not basis:
            return 0
        rows = []
        for c, ct in zip(self.rel_cols, self.col_twists):
            need = (target[0] - ct[0], target[1] - ct[1])
            for s in monomials_of_bidegree(ring, need):
                shifted = K.vec_term_mul(c, _one(ring.p), s, ring.p)
                row = {}
                for (pos, e), v in shifted.items():
                    row[basis[(pos, e)]] = v
                rows.append(row)
        from .linalg import rank as linrank
        return len(basis) - linrank(rows, ring.p)


# ---------------------------------------------------------------- utilities

def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d (deterministic order)."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for head in range(d, -1, -1):
        for tail in monomials_of_degree(nvars - 1, d - head):
            out.append((head,) + tail)
    return out


def monomials_of_bidegree(ring, bideg):
    f, b = bideg
    if f < 0 or b < 0:
        return []
    return [xf + yb for xf in monomials_of_degree(ring.n, f)
            for yb in monomials_of_degree(ring.m, b)]


class SubmoduleGB:
    """Groebner basis of a submodule, with lifting back to the generators."""

    def __init__(self, ring, gens, rank, budget=None):
        self.ring = ring
        self.gens = [dict(g) for g in gens]
        self.rank = rank
        live = [i for i, g in enumerate(self.gens) if g]
        gb = buchberger(ring, [self.gens[i] for i in live], rank,
                        budget=budget, track_reps=True)
        self.gb = gb
        self.reps = [{(live[i], e): c for (i, e), c in rep.items()} for rep in gb.reps]

    def contains(self, vec, budget=None):
        return self.gb.contains(vec, budget)

    def lift(self, vec, budget=None):
        """Coefficients expressing vec over the generators (vec must belong)."""
        nf, cofs = self.gb.normal_form(vec, budget, want_cofactors=True)
        if nf:
            raise TripwireError("lift target is not in the submodule")
        p = self.ring.p
        out = {}
        for k, cof in enumerate(cofs):
            for e, c in cof.items():
                out = K.vec_add(out, K.vec_term_mul(self.reps[k], c, e, p), p)
        return out


def preimage_gens(ring, image_cols, codomain_rank, u_cols, budget=None):
    """Generators of {v : D(v) in <u_cols>} for D given column-wise."""
    nd = len(image_cols)
    combined = [dict(c) for c in image_cols] + [dict(c) for c in u_cols]
    syz = syzygies(ring, combined, codomain_rank, budget=budget)
    out = []
    for s in syz:
        v = {(i, e): c for (i, e), c in s.items() if i < nd}
        if v:
            out.append(v)
    return _dedupe_vecs(out)


def _dedupe_vecs(vecs):
    seen = set()
    out = []
    for v in vecs:
        key = tuple(sorted(v.items()))
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def colon_ideal(ring, u_cols, rank, vec, budget=None):
    """{a : a * vec in <u_cols>} as a list of polynomial term-dicts."""
    pre = preimage_gens(ring, [vec], rank, u_cols, budget)
    out = []
    for v in pre:
        f = {e: c for (_i, e), c in v.items()}
        if f:
            out.append(f)
    return _dedupe_polys(out)


def _dedupe_polys(polys):
    seen = set()
    out = []
    for f in polys:
        key = tuple(sorted(f.items()))
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def ideal_intersection(ring, i_gens, j_gens, budget=None):
    """I cap J via the kernel of S -> S/I + S/J."""
    one = _one(ring.p)
    zero = (0,) * ring.nvars
    diag = {(0, zero): one, (1, zero): one}
    u_cols = [{(0, e): c for e, c in f.items()} for f in i_gens]
    u_cols += [{(1, e): c for e, c in f.items()} for f in j_gens]
    return colon_like(ring, diag, u_cols, budget)


def colon_like(ring, vec, u_cols, budget=None):
    pre = preimage_gens(ring, [vec], 2, u_cols, budget)
    out = []
    for v in pre:
        f = {e: c for (_i, e), c in v.items()}
        if f:
            out.append(f)
    return _dedupe_polys(out)


def ideal_product(ring, i_gens, j_gens):
    out = []
    for f in i_gens:
        for g in j_gens:
            h = K.poly_mul(f, g, ring.p)
            if h:
                out.append(h)
    return _dedupe_polys(out)


def ideal_power(ring, gens, k):
    if k == 0:
        return [{(0,) * ring.nvars: _one(ring.p)}]
    out = gens
    for _ in range(k - 1):
        out = ideal_product(ring, out, gens)
    return out


def ideal_gb(ring, polys, budget=None):
    cols = [{(0, e): c for e, c in (f.terms if hasattr(f, "terms") else f).items()}
            for f in polys]
    return buchberger(ring, cols, 1, budget=budget)


def ideal_contains(ring, polys, f, budget=None):
    gb = ideal_gb(ring, polys, budget)
    terms = f.terms if hasattr(f, "terms") else f
    return gb.contains({(0, e): c for e, c in terms.items()}, budget)


def submodule_equal(ring, a_cols, b_cols, rank, budget=None):
    gba = buchberger(ring, a_cols, rank, budget=budget)
    gbb = buchberger(ring, b_cols, rank, budget=budget)
    return (all(gba.contains(c, budget) for c in b_cols)
            and all(gbb.contains(c, budget) for c in a_cols))


def colon_submodule(ring, u_cols, rank, ideal_gens, budget=None):
    """(U : a) = {v : a*v in U for every generator a}."""
    s = len(ideal_gens)
    if s == 0:
        zero = (0,) * ring.nvars
        one = _one(ring.p)
        return [{(i, zero): one} for i in range(rank)]
    p = ring.p
    image_cols = []
    for i in range(rank):
        col = {}
        for blk, a in enumerate(ideal_gens):
            for e, c in a.items():
                col[(blk * rank + i, e)] = c
        image_cols.append(col)
    big = []
    for blk in range(s):
        for c in u_cols:
            big.append({(blk * rank + pos, e): v for (pos, e), v in c.items()})
    pre = preimage_gens(ring, image_cols, rank * s, big, budget)
    return pre


def saturation_cols(ring, u_cols, rank, ideal_gens, budget=None, max_steps=64):
    """(U : a^infty) by iterating the colon until it stabilizes."""
    cur = [dict(c) for c in u_cols]
    for _ in range(max_steps):
        nxt = colon_submodule(ring, cur, rank, ideal_gens, budget)
        allcols = cur + nxt
        if submodule_equal(ring, cur, allcols, rank, budget):
            return cur
        cur = _dedupe_vecs(allcols)
    raise GstabError("saturation did not stabilize")


def sub_quotient(ring, sub_gens, modulo_cols, ambient_twists, graded="bigraded",
                 budget=None):
    """Presentation of <sub_gens> / <modulo_cols> inside a free module.

    Every modulo generator must lie in <sub_gens>; the relation columns of
    the result are its lifts together with the syzygies of sub_gens.
    """
    sub_gens = [dict(g) for g in sub_gens if g]
    if not sub_gens:
        return ModulePresentation(ring, [], [], graded=graded, adjoin_base_rels=False)
    if graded == "bigraded":
        tw = []
        for g in sub_gens:
            bd = vec_bidegree(ring, g, ambient_twists)
            if bd is None:
                raise GstabError("subquotient generator is not bihomogeneous")
            tw.append(bd)
    elif graded == "fiber":
        tw = []
        for g in sub_gens:
            degs = {ring.fiber_deg(e) + ambient_twists[pos][0] for (pos, e) in g}
            if len(degs) != 1:
                raise GstabError("subquotient generator is not fiber-homogeneous")
            tw.append((degs.pop(), 0))
    else:
        tw = [None] * len(sub_gens)
    sgb = SubmoduleGB(ring, sub_gens, len(ambient_twists), budget)
    rel_cols = []
    for c in modulo_cols:
        if c:
            lifted = sgb.lift(c, budget)
            if lifted:
                rel_cols.append(lifted)
    rel_cols.extend(syzygies(ring, sub_gens, len(ambient_twists), budget=budget))
    pres = ModulePresentation(ring, tw, rel_cols, graded=graded)
    pres.subquotient_gens = sub_gens
    pres.ambient_rank = len(ambient_twists)
    return pres


def quotient_presentation(pres, extra_cols, budget=None):
    """M / <images of extra_cols> with the same generators."""
    cols = [dict(c) for c in pres.rel_cols] + [dict(c) for c in extra_cols if c]
    return ModulePresentation(pres.ring, pres.gen_twists, cols, graded=pres.graded,
                              adjoin_base_rels=False)


def h0_presentation(pres, ideal_gens, budget=None):
    """H^0_I(M) = (0 :_M I^infty) as a presented module (same grading mode)."""
    sat = saturation_cols(pres.ring, pres.rel_cols, pres.rank, ideal_gens, budget)
    return sub_quotient(pres.ring, sat, pres.rel_cols, pres.gen_twists,
                        graded=pres.graded, budget=budget)


def kernel_of_multiplication(pres, poly_terms, budget=None):
    """Generators in the ambient free module of ker(f : M -> M)."""
    ring = pres.ring
    p = ring.p
    image_cols = []
    for i in range(pres.rank):
        image_cols.append({(i, e): c for e, c in poly_terms.items()})
    return preimage_gens(ring, image_cols, pres.rank, pres.rel_cols, budget)


def is_nonzerodivisor(pres, poly_terms, budget=None):
    """True when multiplication by the element is injective on the module."""
    ker = kernel_of_multiplication(pres, poly_terms, budget)
    gb = pres.gb(budget)
    return all(gb.contains(v, budget) for v in ker)


# ------------------------------------------------------- monomial utilities

def poly_is_term(terms):
    return len(terms) == 1


def ideal_is_monomial(ring, gens, budget=None):
    """True when the ideal has a generating set of monomials (via reduced GB)."""
    gens = [g for g in gens if g]
    if not gens:
        return True
    gb = ideal_gb(ring, gens, budget)
    return all(len(v) == 1 for v in gb.vectors)


def monomial_ideal_gens(ring, gens, budget=None):
    """Reduced monomial generators (exponent tuples); ideal must be monomial."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    gb = ideal_gb(ring, gens, budget)
    out = []
    for v in gb.vectors:
        if len(v) != 1:
            raise ScopeError("ideal is not monomial")
        ((_pos, e),) = v.keys()
        out.append(e)
    return sorted(out)


def squarefree_part(e):
    return tuple(1 if x else 0 for x in e)


def mono_support(e):
    return frozenset(i for i, x in enumerate(e) if x)


def minimal_primes_of_monomial(ring, mono_exps):
    """Minimal primes of a monomial ideal as variable-index frozensets.

    The radical of a monomial ideal is generated by the squarefree parts,
    and its minimal primes are the minimal covers of the generator supports.
    """
    supports = [mono_support(e) for e in mono_exps]
    if any(not s for s in supports):  # contains a unit
        return []
    nv = ring.nvars
    covers = []
    for size in range(nv + 1):
        for cand in itertools.combinations(range(nv), size):
            cs = frozenset(cand)
            if any(cs >= c for c in covers):
                continue
            if all(s & cs for s in supports):
                covers.append(cs)
    return sorted(covers, key=sorted)


def prime_dim(ring, var_subset):
    """dim of R/p for the monomial prime on the given variable indices."""
    return ring.nvars - len(var_subset)


def ideal_dimension(ring, gens, budget=None):
    """dim R/I via independent sets modulo the initial ideal."""
    gens = [g for g in gens if g]
    if not gens:
        return ring.nvars
    gb = ideal_gb(ring, gens, budget)
    leads = []
    for v, lt in zip(gb.vectors, gb.leads):
        leads.append(mono_support(lt[1]))
    if frozenset() in leads:
        return -1  # unit ideal
    best = -1
    for size in range(ring.nvars, -1, -1):
        for cand in itertools.combinations(range(ring.nvars), size):
            cs = frozenset(cand)
            if all(not s <= cs for s in leads):
                return size
    return best


def module_dimension(pres, budget=None):
    """dim Supp(M) = dim R/ann(M)."""
    if pres.is_zero(budget):
        return -1
    ann = pres.annihilator(budget)
    return ideal_dimension(pres.ring, ann, budget)
