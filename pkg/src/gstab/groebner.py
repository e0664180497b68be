"""Buchberger engine for submodules of twisted free modules.

Works uniformly for ideals (rank-1 modules) and for submodules of free
modules, with position-over-term orders on top of the ring's monomial
order.  Everything is deterministic: pair selection is by (lcm degree,
internal indices), reducers are tried in list order, and completed bases
are inter-reduced, made monic and sorted.
"""

import itertools
from fractions import Fraction

from . import kernel as K
from .core import PolyMatrix, vec_bidegree
from .errors import GstabError, TripwireError

DEFAULT_FUEL = 500_000_000


class Budget:
    """Mutable step budget shared along a computation."""

    def __init__(self, fuel=DEFAULT_FUEL):
        self.fuel = fuel

    def spend_reduce(self, *args):
        out, cofs, self.fuel = K.vec_reduce(*args, self.fuel)
        return out, cofs


def _monic(vec, lead, p):
    c = vec[lead]
    one = 1 if p else c / c
    if c == one:
        return vec
    return K.vec_scale(vec, K.scalar_inv(c, p), p)


class GroebnerBasis:
    """Completed, auto-reduced basis of a submodule of a free module."""

    def __init__(self, ring, rank, vectors, reps=None, order_code=None):
        self.ring = ring
        self.rank = rank
        self.order_code = ring.order_code if order_code is None else order_code
        self.vectors = vectors
        self.leads = [K.vec_lead(v, self.order_code, ring.n) for v in vectors]
        self.lead_coeffs = [v[t] for v, t in zip(vectors, self.leads)]
        self.reps = reps
        self.completed = True

    def normal_form(self, vec, budget=None, want_cofactors=False):
        budget = budget or Budget()
        nf, cofs = budget.spend_reduce(vec, self.leads, self.lead_coeffs, self.vectors,
                                       self.ring.p, self.order_code, self.ring.n,
                                       want_cofactors)
        return (nf, cofs) if want_cofactors else nf

    def contains(self, vec, budget=None):
        return not self.normal_form(vec, budget)


def buchberger(ring, vectors, rank, budget=None, track_reps=False,
               use_criteria=True, enforce_bihomog=False, row_twists=None):
    """Complete a generating set to a reduced Groebner basis.

    With track_reps, each basis element also carries its expression in
    terms of the input generators (a vector over the input index set).
    """
    budget = budget or Budget()
    p = ring.p
    code = ring.order_code
    nx = ring.n
    if enforce_bihomog:
        if row_twists is None:
            raise GstabError("bihomogeneity check needs row twists")
        for v in vectors:
            if v and vec_bidegree(ring, v, row_twists) is None:
                raise GstabError("generator is not bihomogeneous")

    basis, leads, reps = [], [], []
    zerodim = (0,) * ring.nvars
    for i, v in enumerate(vectors):
        if not v:
            continue
        lt = K.vec_lead(v, code, nx)
        basis.append(_monic(v, lt, p))
        leads.append(lt)
        if track_reps:
            reps.append({(i, zerodim): K.scalar_inv(v[lt], p)})

    pairs = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if leads[i][0] == leads[j][0]:
                lcm = K.mono_lcm(leads[i][1], leads[j][1])
                pairs.append((K.mono_deg(lcm), i, j))
    pairs.sort()

    while pairs:
        _deg, i, j = pairs.pop(0)
        li, lj = leads[i], leads[j]
        lcm = K.mono_lcm(li[1], lj[1])
        if use_criteria and rank == 1 and lcm == K.mono_mul(li[1], lj[1]):
            continue  # product criterion (valid for ideals only)
        ui = K.mono_sub(lcm, li[1])
        uj = K.mono_sub(lcm, lj[1])
        spair = K.vec_add(K.vec_term_mul(basis[i], basis[i][li], ui, p),
                          K.vec_neg(K.vec_term_mul(basis[j], basis[j][lj], uj, p), p), p)
        lcs = [basis[k][leads[k]] for k in range(len(basis))]
        nf, cofs = budget.spend_reduce(spair, leads, lcs, basis, p, code, nx, track_reps)
        if not nf:
            continue
        if track_reps:
            rep = K.vec_add(K.vec_term_mul(reps[i], basis[i][li], ui, p),
                            K.vec_neg(K.vec_term_mul(reps[j], basis[j][lj], uj, p), p), p)
            for k, cof in enumerate(cofs):
                for e, c in cof.items():
                    rep = K.vec_add(rep, K.vec_neg(K.vec_term_mul(reps[k], c, e, p), p), p)
            lt = K.vec_lead(nf, code, nx)
            reps.append(K.vec_scale(rep, K.scalar_inv(nf[lt], p), p))
        lt = K.vec_lead(nf, code, nx)
        t = len(basis)
        basis.append(_monic(nf, lt, p))
        leads.append(lt)
        for k in range(t):
            if leads[k][0] == lt[0]:
                lcm2 = K.mono_lcm(leads[k][1], lt[1])
                pairs.append((K.mono_deg(lcm2), k, t))
        pairs.sort()

    basis, leads, reps = _interreduce(ring, basis, leads, reps if track_reps else None, budget)
    order = sorted(range(len(basis)), key=lambda k: K.term_key(leads[k][0], leads[k][1], code, nx))
    basis = [basis[k] for k in order]
    reps = [reps[k] for k in order] if track_reps else None
    return GroebnerBasis(ring, rank, basis, reps=reps)


def _interreduce(ring, basis, leads, reps, budget):
    p, code, nx = ring.p, ring.order_code, ring.n
    changed = True
    while changed:
        changed = False
        for idx in range(len(basis)):
            if basis[idx] is None:
                continue
            others = [k for k in range(len(basis)) if k != idx and basis[k] is not None]
            ovecs = [basis[k] for k in others]
            oleads = [leads[k] for k in others]
            olcs = [basis[k][leads[k]] for k in others]
            nf, cofs = budget.spend_reduce(basis[idx], oleads, olcs, ovecs,
                                           p, code, nx, reps is not None)
            if nf == basis[idx]:
                continue
            changed = True
            if reps is not None:
                rep = reps[idx]
                for k, cof in zip(others, cofs):
                    for e, c in cof.items():
                        rep = K.vec_add(rep, K.vec_neg(K.vec_term_mul(reps[k], c, e, p), p), p)
            if not nf:
                basis[idx] = None
            else:
                lt = K.vec_lead(nf, code, nx)
                basis[idx] = _monic(nf, lt, p)
                leads[idx] = lt
                if reps is not None:
                    reps[idx] = K.vec_scale(rep, K.scalar_inv(nf[lt], p), p)
    keep = [k for k in range(len(basis)) if basis[k] is not None]
    return ([basis[k] for k in keep], [leads[k] for k in keep],
            [reps[k] for k in keep] if reps is not None else None)


def normal_form(ring, vec, gb, budget=None):
    return gb.normal_form(vec, budget)


def syzygies(ring, vectors, rank, budget=None, over_quotient=False):
    """Generators of the syzygy module of `vectors`.

    Schreyer route: complete to a Groebner basis H with expressions in the
    inputs, then reduce every S-pair of H; each zero reduction contributes
    a syzygy of H, and the two change-of-basis matrices transport these
    (plus the tautological rows of I - B*A) back to syzygies of the input.

    With over_quotient, the base relations J act as zero: J-multiples of
    the basis vectors are adjoined and the result is projected back.
    """
    budget = budget or Budget()
    p, code, nx = ring.p, ring.order_code, ring.n
    vectors = [dict(v) for v in vectors]
    nvec = len(vectors)
    work = list(vectors)
    if over_quotient and ring.base_rels:
        for pos in range(rank):
            for rel in ring.base_rels:
                work.append({(pos, e): c for e, c in rel.items()})

    live = [i for i, v in enumerate(work) if v]
    gb = buchberger(ring, [work[i] for i in live], rank, budget=budget,
                    track_reps=True, use_criteria=True)
    # re-index reps over the original input positions
    reps = []
    for rep in gb.reps:
        reps.append({(live[i], e): c for (i, e), c in rep.items()})

    syz_h = []
    H, leads = gb.vectors, gb.leads
    lcs = gb.lead_coeffs
    for i in range(len(H)):
        for j in range(i + 1, len(H)):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = K.mono_lcm(leads[i][1], leads[j][1])
            ui = K.mono_sub(lcm, leads[i][1])
            uj = K.mono_sub(lcm, leads[j][1])
            spair = K.vec_add(K.vec_term_mul(H[i], lcs[i], ui, p),
                              K.vec_neg(K.vec_term_mul(H[j], lcs[j], uj, p), p), p)
            nf, cofs = budget.spend_reduce(spair, leads, lcs, H, p, code, nx, True)
            if nf:
                raise TripwireError("S-pair of a completed basis did not reduce to zero")
            sig = {(i, ui): lcs[i]}
            sig = K.vec_add(sig, {(j, uj): (p - lcs[j]) % p if p else -lcs[j]}, p)
            for k, cof in enumerate(cofs):
                for e, c in cof.items():
                    sig = K.vec_add(sig, {(k, e): (p - c) % p if p else -c}, p)
            if sig:
                syz_h.append(sig)

    def through_a(vec_over_h):
        out = {}
        for (k, e), c in vec_over_h.items():
            out = K.vec_add(out, K.vec_term_mul(reps[k], c, e, p), p)
        return out

    out = []
    zerodim = (0,) * ring.nvars
    one = 1 if p else Fraction(1)
    for l, g in enumerate(work):
        if not g:
            out.append({(l, zerodim): one})
            continue
        nf, cofs = budget.spend_reduce(g, leads, lcs, H, p, code, nx, True)
        if nf:
            raise TripwireError("input generator did not reduce to zero against its basis")
        bl = {}
        for k, cof in enumerate(cofs):
            for e, c in cof.items():
                bl = K.vec_add(bl, {(k, e): c}, p)
        s = K.vec_add({(l, zerodim): one}, K.vec_neg(through_a(bl), p), p)
        if s:
            out.append(s)
    for sig in syz_h:
        s = through_a(sig)
        if s:
            out.append(s)

    if over_quotient:
        out = [{(i, e): c for (i, e), c in s.items() if i < nvec} for s in out]
        out = [s for s in out if s]
    out.sort(key=lambda s: sorted(s.items()).__repr__())
    return _dedupe(out)


def _dedupe(vecs):
    seen = set()
    keep = []
    for v in vecs:
        key = tuple(sorted(v.items()))
        if key not in seen:
            seen.add(key)
            keep.append(v)
    return keep


class FreeResolution:
    """Chain of twisted free modules with composable differentials.

    twists[i] lists the generator bidegrees of F_i; maps[i] is the
    differential F_{i+1} -> F_i, stored column-wise.  `complete` records
    whether the syzygy chain was exhausted (False when truncated by a
    length bound).
    """

    def __init__(self, ring, twists, maps, complete=True):
        self.ring = ring
        self.twists = twists
        self.maps = maps
        self.complete = complete
        self._check_complex()

    def _check_complex(self):
        for a, b in zip(self.maps, self.maps[1:]):
            comp = a.compose(b)
            if not comp.is_zero():
                raise TripwireError("differentials do not compose to zero")

    @property
    def length(self):
        return len(self.maps)

    def module_rank(self, i):
        return len(self.twists[i]) if i < len(self.twists) else 0

    def map_cols(self, i):
        """Columns of F_{i+1} -> F_i, empty past the end."""
        if i < len(self.maps):
            return self.maps[i].cols
        return []

    def has_constant_entry(self):
        zero = (0,) * self.ring.nvars
        for mp in self.maps:
            for col in mp.cols:
                for (pos, e) in col:
                    if e == zero:
                        return True
        return False

    def canonical(self):
        return (tuple(tuple(map(tuple, t)) for t in self.twists),
                tuple(mp.canonical() for mp in self.maps))


def free_resolution(ring, gen_twists, rel_cols, length_bound=None, budget=None,
                    minimize=True):
    """Free resolution of coker(rel_cols) over the ambient polynomial ring.

    Over a quotient base the caller is expected to have adjoined the base
    relations to rel_cols already.  The resolution is pruned to a minimal
    one (no constant entries) unless minimize is False.
    """
    budget = budget or Budget()
    if length_bound is None:
        length_bound = ring.nvars + 1
    twists = [list(gen_twists)]
    maps = []
    cols = [dict(c) for c in rel_cols if c]
    if cols:
        col_twists = []
        for c in cols:
            bd = vec_bidegree(ring, c, twists[0])
            if bd is None:
                raise GstabError("relation column is not bihomogeneous")
            col_twists.append(bd)
        maps.append(PolyMatrix(ring, len(twists[0]), twists[0], cols, col_twists))
        twists.append(col_twists)
    complete = True
    step = 1
    while step <= len(maps):
        if len(maps) >= length_bound:
            prev = maps[-1]
            tail = syzygies(ring, prev.cols, prev.nrows, budget=budget)
            complete = not any(tail)
            break
        prev = maps[-1]
        syz = syzygies(ring, prev.cols, prev.nrows, budget=budget)
        syz = [s for s in syz if s]
        if not syz:
            break
        ct = []
        for s in syz:
            bd = vec_bidegree(ring, s, twists[-1])
            if bd is None:
                raise TripwireError("syzygy of bihomogeneous input is inhomogeneous")
            ct.append(bd)
        maps.append(PolyMatrix(ring, len(twists[-1]), twists[-1], syz, ct))
        twists.append(ct)
        step += 1
    res = FreeResolution(ring, twists, maps, complete=complete)
    if minimize:
        res = prune_resolution(res, budget)
    return res


def _find_constant(cols, nvars):
    zero = (0,) * nvars
    for q, col in enumerate(cols):
        for (pos, e), c in col.items():
            if e == zero:
                return pos, q, c
    return None


def prune_resolution(res, budget=None):
    """Cancel unit (constant) entries until none remain.

    Splitting off each trivial S(-a) --1--> S(-a) summand is a homotopy
    equivalence, so exactness is preserved and the result is minimal over
    a polynomial ambient ring.
    """
    ring = res.ring
    p = ring.p
    twists = [list(t) for t in res.twists]
    maps = [[dict(c) for c in mp.cols] for mp in res.maps]

    def vec_poly_comb(col, poly, p):
        out = {}
        for e, c in poly.items():
            out = K.vec_add(out, K.vec_term_mul(col, c, e, p), p)
        return out

    changed = True
    while changed:
        changed = False
        for s in range(len(maps)):
            hit = _find_constant(maps[s], ring.nvars)
            if hit is None:
                continue
            changed = True
            prow, qcol, u = hit
            uinv = K.scalar_inv(u, p)
            colq = maps[s][qcol]
            newcols = []
            for j, col in enumerate(maps[s]):
                if j == qcol:
                    continue
                apj = {e: c for (pos, e), c in col.items() if pos == prow}
                if apj:
                    fac = K.poly_scale(apj, uinv, p)
                    col = K.vec_add(col, K.vec_neg(vec_poly_comb(colq, fac, p), p), p)
                col = {(pos, e): c for (pos, e), c in col.items() if pos != prow}
                col = {(pos - (pos > prow), e): c for (pos, e), c in col.items()}
                newcols.append(col)
            maps[s] = newcols
            del twists[s + 1][qcol]
            del twists[s][prow]
            if s + 1 < len(maps):
                nxt = []
                for col in maps[s + 1]:
                    col = {(pos, e): c for (pos, e), c in col.items() if pos != qcol}
                    nxt.append({(pos - (pos > qcol), e): c for (pos, e), c in col.items()})
                maps[s + 1] = nxt
            if s >= 1:
                prv = []
                for j, col in enumerate(maps[s - 1]):
                    if j == prow:
                        continue
                    prv.append(col)
                maps[s - 1] = prv
            break
    # drop empty tail steps
    while maps and not any(maps[-1]):
        maps.pop()
        twists.pop()
    out_maps = []
    for s in range(len(maps)):
        out_maps.append(PolyMatrix(ring, len(twists[s]), twists[s], maps[s], twists[s + 1]))
    return FreeResolution(ring, twists[: len(maps) + 1], out_maps, complete=res.complete)


def betti_table(res):
    """(homological index, bidegree twist) -> rank, from a minimal resolution."""
    if res.has_constant_entry():
        raise GstabError("resolution is not minimal: prune it first")
    table = {}
    for i, tw in enumerate(res.twists):
        for t in tw:
            key = (i, tuple(t))
            table[key] = table.get(key, 0) + 1
    return table


def _det(ring, rows, cols, entries, memo):
    key = (rows, cols)
    if key in memo:
        return memo[key]
    p = ring.p
    if not rows:
        out = {(0,) * ring.nvars: 1 if p else Fraction(1)}
    else:
        out = {}
        r0 = rows[0]
        rest = rows[1:]
        for idx, c in enumerate(cols):
            f = entries.get((r0, c))
            if not f:
                continue
            sub = _det(ring, rest, cols[:idx] + cols[idx + 1:], entries, memo)
            term = K.poly_mul(f, sub, p)
            if idx % 2:
                term = K.poly_neg(term, p)
            out = K.poly_add(out, term, p)
    memo[key] = out
    return out


def fitting_ideal(ring, ngens, rel_cols, k=0):
    """Generators of Fitt_k of coker(rel_cols): the (ngens-k)-minors."""
    size = ngens - k
    if size <= 0:
        return [ring.one()]
    cols = [dict(c) for c in rel_cols]
    if size > ngens or size > len(cols):
        return []
    entries = {}
    for j, col in enumerate(cols):
        for (pos, e), c in col.items():
            entries.setdefault((pos, j), {})[e] = c
    memo = {}
    out = []
    seen = set()
    for rows in itertools.combinations(range(ngens), size):
        for cc in itertools.combinations(range(len(cols)), size):
            d = _det(ring, rows, cc, entries, memo)
            if d:
                key = tuple(sorted(d.items()))
                if key not in seen:
                    seen.add(key)
                    out.append(d)
    return [ring.poly(d) for d in out]
