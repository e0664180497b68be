"""Finite complexes: Koszul complexes, dualized resolution slices, and the
power-Koszul approximation of local cohomology.

The dualized-slice route is the authoritative computation of the graded
pieces of local cohomology with respect to the fiber ideal; the
power-Koszul colimit is kept as an independent test oracle.
"""

import itertools
from fractions import Fraction

from . import kernel as K
from .errors import GstabError, InconclusiveError, TripwireError
from .groebner import Budget, free_resolution, syzygies
from .modules import (ModulePresentation, preimage_gens, sub_quotient,
                      monomials_of_degree)


def _one(p):
    return 1 if p else Fraction(1)


class PresentedComplex:
    """Ascending chain of presented modules with degree-preserving maps.

    spots[i] = (gen_twists, rel_cols); diffs[i] = columns of the map from
    spot i to spot i+1 (one column per generator of spot i).  Maps must
    send relations into relations and compose to zero modulo relations.
    """

    def __init__(self, ring, spots, diffs, graded="bigraded"):
        self.ring = ring
        self.spots = spots
        self.diffs = diffs
        self.graded = graded

    def nspots(self):
        return len(self.spots)

    def rank(self, i):
        return len(self.spots[i][0])

    def homology(self, i, budget=None):
        """ker(d_i)/(im(d_{i-1}) + relations) as a presented module."""
        twists, rels = self.spots[i]
        rank = len(twists)
        if rank == 0:
            return ModulePresentation(self.ring, [], [], graded=self.graded,
                                      adjoin_base_rels=False)
        if i < len(self.diffs) and len(self.spots) > i + 1 and self.rank(i + 1) > 0:
            out_cols = self.diffs[i]
            rel_next = self.spots[i + 1][1]
            kgens = preimage_gens(self.ring, out_cols, self.rank(i + 1),
                                  rel_next, budget)
        else:
            zero = (0,) * self.ring.nvars
            one = _one(self.ring.p)
            kgens = [{(j, zero): one} for j in range(rank)]
        den = list(rels)
        if i > 0:
            den = [dict(c) for c in self.diffs[i - 1]] + den
        return sub_quotient(self.ring, kgens, den, twists, graded=self.graded,
                            budget=budget)


class KoszulComplexRec:
    """Koszul complex of a sequence acting on a presented module.

    Cohomological indexing: differentials raise the index by exterior
    multiplication with the sequence; H^0 is the annihilator of the
    sequence ideal and H^r the quotient by it.  The homological variant
    (contraction) is stored in the same ascending layout, reversed.
    """

    def __init__(self, ring, elements, module, cohomological=True, graded=None):
        self.ring = ring
        self.elements = [ring.poly(a) for a in elements]
        self.module = module
        self.cohomological = cohomological
        self.r = len(self.elements)
        if graded is None:
            graded = module.graded
            if graded != "none" and any(a.bidegree() is None for a in self.elements):
                graded = "none"
        self.graded = graded
        self._build()

    def _sub_lists(self):
        return [list(itertools.combinations(range(self.r), p))
                for p in range(self.r + 1)]

    def _build(self):
        ring, M, r = self.ring, self.module, self.r
        p_char = ring.p
        subs = self._sub_lists()
        idx = [{T: k for k, T in enumerate(level)} for level in subs]
        adeg = [a.bidegree() or (0, 0) for a in self.elements]
        # dual convention for the cohomological complex: the wedge-T dual
        # generator sits in degree -sum(deg a_t), so that K^j = K_{r-j}(r*delta)
        sgn = -1 if self.cohomological else 1
        spots = []
        for p in range(r + 1):
            tw = []
            for T in subs[p]:
                df = sgn * sum(adeg[t][0] for t in T)
                db = sgn * sum(adeg[t][1] for t in T)
                for t0 in M.gen_twists:
                    base = t0 if self.graded != "none" else (0, 0)
                    tw.append((base[0] + df, base[1] + db))
            rels = []
            for c in M.rel_cols:
                for k, _T in enumerate(subs[p]):
                    rels.append({(k * M.rank + pos, e): v for (pos, e), v in c.items()})
            spots.append((tw if self.graded != "none" else [None] * len(tw), rels))
        diffs = []
        for p in range(r):
            cols = []
            for k, T in enumerate(subs[p]):
                for j in range(M.rank):
                    col = {}
                    for l in range(r):
                        if l in T:
                            continue
                        newT = tuple(sorted(T + (l,)))
                        sgn = sum(1 for t in T if t < l)
                        tgt = idx[p + 1][newT] * M.rank + j
                        for e, c in self.elements[l].terms.items():
                            cc = c if sgn % 2 == 0 else ((p_char - c) % p_char if p_char else -c)
                            col = K.vec_add(col, {(tgt, e): cc}, p_char)
                    cols.append(col)
            diffs.append(cols)
        if self.cohomological:
            self.chain = PresentedComplex(ring, spots, diffs, graded=self.graded)
        else:
            # contraction differentials, stored ascending from K_r down to K_0
            rspots = list(reversed(spots))
            rdiffs = []
            for p in range(r, 0, -1):
                cols = []
                for k, T in enumerate(subs[p]):
                    for j in range(M.rank):
                        col = {}
                        for pos_l, l in enumerate(T):
                            newT = tuple(t for t in T if t != l)
                            sgn = pos_l
                            tgt = idx[p - 1][newT] * M.rank + j
                            for e, c in self.elements[l].terms.items():
                                cc = c if sgn % 2 == 0 else ((p_char - c) % p_char if p_char else -c)
                                col = K.vec_add(col, {(tgt, e): cc}, p_char)
                        cols.append(col)
                rdiffs.append(cols)
            self.chain = PresentedComplex(ring, rspots, rdiffs, graded=self.graded)

    def spot_rank(self, p):
        import math
        return math.comb(self.r, p) * self.module.rank

    def cohomology(self, i, budget=None):
        """H^i for the cohomological variant, H_i for the homological one."""
        if not 0 <= i <= self.r:
            raise GstabError("Koszul index out of range")
        if self.cohomological:
            return self.chain.homology(i, budget)
        return self.chain.homology(self.r - i, budget)


def koszul_complex(ring, elements, module, cohomological=True):
    return KoszulComplexRec(ring, elements, module, cohomological=cohomological)


def koszul_cohomology(ring, elements, module, i, budget=None):
    return koszul_complex(ring, elements, module).cohomology(i, budget)


# ------------------------------------------------------------ dualized slices

class SliceComplex:
    """Free complex over the base ring computing one graded piece of the
    fiber local cohomology, with the homological shift recorded.

    spot l holds the base-ring dual of the fiber-degree -(nu)-n slice of
    Hom(F_{-l}, S); its homology at l = i - n is H^i_{S_+}(M)_nu.
    """

    def __init__(self, base_ring, nu, n, spots, mats):
        self.base_ring = base_ring
        self.nu = nu
        self.n = n
        self.spots = spots  # list of (label list, twists); index 0 <-> l = -L
        self.mats = mats
        self.offset = len(spots) - 1  # spot index of l = 0

    def spot_index(self, l):
        return l + self.offset

    def homology_at_cohomological_index(self, i, budget=None):
        l = i - self.n
        s = self.spot_index(l)
        if s < 0 or s >= len(self.spots):
            return None
        chain = PresentedComplex(self.base_ring,
                                 [(tw, []) for (_lab, tw) in self.spots],
                                 self.mats, graded="bigraded")
        return chain.homology(s, budget)


def dual_slice_complex(res, nu, budget=None):
    """Dualized-resolution slice computing H^*_{S_+}(M)_nu over the base.

    Built from a free resolution over the ambient ring: dualize into the
    ambient ring, take the fiber-degree (-nu - n) component as free
    base-ring modules, and dualize again over the base.
    """
    ring = res.ring
    n = ring.n
    base = ring.base_context()
    L = len(res.twists) - 1
    labels = []
    twists = []
    for h in range(L, -1, -1):  # spot for l = -h
        lab = []
        tw = []
        for j, (tf, tb) in enumerate(res.twists[h] if h < len(res.twists) else []):
            d = tf - nu - n
            for e in monomials_of_degree(n, d):
                lab.append((h, j, e))
                tw.append((0, tb))
        labels.append(lab)
        twists.append(tw)
    index = [{lab: k for k, lab in enumerate(level)} for level in labels]
    mats = []
    p = ring.p
    for s in range(L):  # map spot s -> s+1, i.e. l = -(L-s) -> l = -(L-s-1)
        h = L - s  # source homological index
        cols = []
        # E^l -> E^{l+1} is the base-ring transpose of the slice of
        # Hom(F_{h-1}, S) -> Hom(F_h, S), which itself is the transpose of
        # d_h : F_h -> F_{h-1}.  Net effect: column for source label
        # (h, j, e) collects, for every entry q of d_h in row j', the
        # coefficient landing on target label (h-1, j', e').
        dh = res.maps[h - 1] if h - 1 < len(res.maps) else None
        for (hh, j, e) in labels[s]:
            col = {}
            if dh is not None:
                # d_h column j (a vector in F_{h-1}) describes d_h(e_j).
                for (jprime, q), c in dh.cols[j].items():
                    # q = x^a y^b; contributes e' = e - x-part, y-part coeff
                    xa = q[:n]
                    yb = q[n:]
                    if not K.mono_divides(xa, e):
                        continue
                    eprime = K.mono_sub(e, xa)
                    tgt = index[s + 1].get((h - 1, jprime, eprime))
                    if tgt is None:
                        continue
                    mono = (0,) * base.n + yb
                    col = K.vec_add(col, {(tgt, mono): c}, p)
            cols.append(col)
        mats.append(cols)
    return SliceComplex(base, nu, n, list(zip(labels, twists)), mats)


def local_cohomology_slice(res, i, nu, budget=None):
    """H^i_{S_+}(M)_nu as a presented module over the base ring."""
    ring = res.ring
    base = ring.base_context()
    if i < 0 or i > ring.n:
        return ModulePresentation(base, [], [], graded="bigraded",
                                  adjoin_base_rels=False)
    needed = ring.n - i + 1
    if not res.complete and len(res.maps) < needed:
        raise GstabError("resolution too short: need homological index %d" % needed)
    sc = dual_slice_complex(res, nu, budget)
    pres = sc.homology_at_cohomological_index(i, budget)
    if pres is None:
        return ModulePresentation(base, [], [], graded="bigraded",
                                  adjoin_base_rels=False)
    return pres


# --------------------------------------------------------------- Ext modules

def dual_complex_spots(res):
    """Spots and maps of Hom(F_., S): free spots, transposed differentials."""
    ring = res.ring
    spots = []
    for tw in res.twists:
        spots.append(([(-f, -b) for (f, b) in tw], []))
    diffs = []
    for mp in res.maps:
        diffs.append(mp.transpose().cols)
    return spots, diffs


def ext_module(res, q, budget=None):
    """Ext^q(M, S) over the ambient ring, from a free resolution of M."""
    spots, diffs = dual_complex_spots(res)
    if q >= len(spots):
        return ModulePresentation(res.ring, [], [], graded="bigraded",
                                  adjoin_base_rels=False)
    chain = PresentedComplex(res.ring, spots, diffs, graded="bigraded")
    return chain.homology(q, budget)


def hom_complex_into(res_twists_ranks, maps, module, budget=None):
    """Hom(F_., N) for a free complex over the base ring: spots N^{b_q}."""
    ring = module.ring
    spots = []
    diffs = []
    for b in res_twists_ranks:
        tw = []
        rels = []
        for copy in range(b):
            tw.extend(module.gen_twists if module.graded != "none"
                      else [None] * module.rank)
        for copy in range(b):
            for c in module.rel_cols:
                rels.append({(copy * module.rank + pos, e): v
                             for (pos, e), v in c.items()})
        spots.append((tw, rels))
    p = ring.p
    for mp in maps:
        # Hom(d, N): from N^{b_q} to N^{b_{q+1}} with matrix d^T acting
        tr = mp.transpose()
        cols = []
        b_src = mp.nrows
        for src_copy in range(b_src):
            for j in range(module.rank):
                col = {}
                for (row, e), c in tr.cols[src_copy].items():
                    col = K.vec_add(col, {(row * module.rank + j, e): c}, p)
                cols.append(col)
        diffs.append(cols)
    return PresentedComplex(ring, spots, diffs, graded=module.graded)


# ----------------------------------------------------------- power colimit

class CechSliceResult:
    def __init__(self, stabilized, t_reached, dim=None, presentation=None):
        self.stabilized = stabilized
        self.t_reached = t_reached
        self.dim = dim
        self.presentation = presentation

    def __repr__(self):
        if not self.stabilized:
            return "CechSliceResult(not stabilized by t=%d)" % self.t_reached
        return "CechSliceResult(dim=%r, t=%d)" % (self.dim, self.t_reached)


def cech_power_limit(ring, elements, module, i, fiber_degree, t_max=8, budget=None):
    """Stabilized fiber-degree slice of H^i over increasing Koszul powers.

    Computes H^i(a^t; M) restricted to the slice for t = 1, 2, ... and
    reports once the comparison maps restrict to isomorphisms on two
    consecutive steps; otherwise reports non-stabilization explicitly.
    """
    from .slices import graded_slice

    elements = [ring.poly(a) for a in elements]
    iso_streak = 0
    history = []
    for t in range(1, t_max + 1):
        powers = [a ** t for a in elements]
        kc = koszul_complex(ring, powers, module, cohomological=True)
        hom = kc.cohomology(i, budget)
        sl = graded_slice(hom, fiber_degree)
        history.append(sl)
        if len(history) >= 2:
            iso = _transition_is_iso(ring, elements, module, i,
                                     history[-2], history[-1], budget)
            iso_streak = iso_streak + 1 if iso else 0
            if iso_streak >= 2:
                dim = None
                if ring.m == 0 and not ring.base_rels:
                    dim = sl.presentation.slice_k_dimension((0, 0))
                return CechSliceResult(True, t, dim=dim,
                                       presentation=sl.presentation)
    return CechSliceResult(False, t_max)


def _transition_is_iso(ring, elements, module, i, sl_old, sl_new, budget):
    """Does H^i(a^t) -> H^i(a^{t+1}) restrict to an iso of the slices?

    The comparison map multiplies the wedge-T component by the product of
    the a_l with l in T; old slice generators are transported through it,
    lifted into the new subquotient, and the induced base-ring map is
    tested for zero kernel and zero cokernel.
    """
    from .modules import SubmoduleGB, quotient_presentation

    p = ring.p
    r = len(elements)
    subs = list(itertools.combinations(range(r), i))
    rank = module.rank
    old_pres = sl_old.presentation
    new_pres = sl_new.presentation
    old_zero = old_pres.is_zero(budget)
    new_zero = new_pres.is_zero(budget)
    if old_zero or new_zero:
        return old_zero and new_zero

    hom_old = sl_old.parent
    hom_new = sl_new.parent
    spot_rank = len(subs) * rank

    def phi(vec):
        out = {}
        for (pos, e), c in vec.items():
            k, j = divmod(pos, rank)
            mult = ring.one()
            for l in subs[k]:
                mult = mult * elements[l]
            shifted = K.poly_term_mul(mult.terms, c, e, p)
            out = K.vec_add(out, {(pos, ee): cc for ee, cc in shifted.items()}, p)
        return out

    sgb_new = SubmoduleGB(ring, hom_new.subquotient_gens, spot_rank, budget)
    n = ring.n
    cols = []
    for g_idx in range(old_pres.rank):
        jj, alpha = sl_old.basis[g_idx]
        amb = K.vec_term_mul(hom_old.subquotient_gens[jj], _one(p),
                             alpha + (0,) * ring.m, p)
        coords = sgb_new.lift(phi(amb), budget)
        col = {}
        for (kk, exps), c in coords.items():
            idx = sl_new.basis_index.get((kk, exps[:n]))
            if idx is None:
                raise TripwireError("comparison map broke the fiber grading")
            col = K.vec_add(col, {(idx, exps[n:]): c}, new_pres.ring.p)
        cols.append(col)
    coker = quotient_presentation(new_pres, cols, budget)
    if not coker.is_zero(budget):
        return False
    pre = preimage_gens(new_pres.ring, cols, new_pres.rank, new_pres.rel_cols, budget)
    gb = old_pres.gb(budget)
    return all(gb.contains(v, budget) for v in pre)
