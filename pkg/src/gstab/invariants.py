"""Homological invariants: regularity, a-invariants, depth, cohomological
dimension, associated primes, support-dimension torsion, localization and
generic coordinates.

Conventions: -inf/+inf results are float("-inf")/float("inf"); every
finite value is an int.  Wherever two independent routes compute the same
number they must agree exactly, and a mismatch raises TripwireError.
"""

import itertools
import random
from fractions import Fraction

from . import kernel as K
from .core import PolyMatrix, RingContext
from .errors import (GstabError, InconclusiveError, ScopeError, TripwireError)
from .groebner import Budget, free_resolution, syzygies
from .linalg import rank as linrank
from .modules import (ModulePresentation, SubmoduleGB, colon_ideal,
                      colon_submodule, h0_presentation, ideal_contains,
                      ideal_dimension, ideal_gb, ideal_is_monomial,
                      ideal_power, ideal_product, is_nonzerodivisor,
                      kernel_of_multiplication, minimal_primes_of_monomial,
                      module_dimension, mono_support, monomial_ideal_gens,
                      monomials_of_degree, preimage_gens,
                      quotient_presentation, squarefree_part, submodule_equal)
from .complexes import (PresentedComplex, ext_module, hom_complex_into,
                        koszul_complex, local_cohomology_slice)
from .slices import bottom_fiber_degree, graded_slice, slice_nonzero, top_fiber_degree

NEG_INF = float("-inf")
POS_INF = float("inf")


def _one(p):
    return 1 if p else Fraction(1)


def _fiber_ideal(ring):
    return [ring.var(v).terms for v in ring.fiber_vars]


def resolution_of(module, budget=None, length_bound=None):
    key = ("res", length_bound)
    if key not in module._cache:
        module._cache[key] = free_resolution(
            module.ring, module.gen_twists, module.rel_cols,
            length_bound=length_bound, budget=budget)
    return module._cache[key]


# ------------------------------------------------------------------ H^0_{S+}

def fiber_torsion(module, budget=None):
    """H^0_{S_+}(M): the S_+-power-torsion submodule, as a presentation."""
    key = "h0_splus"
    if key not in module._cache:
        xs = _fiber_ideal(module.ring)
        if not xs:
            module._cache[key] = module
        else:
            module._cache[key] = h0_presentation(module, xs, budget)
    return module._cache[key]


def _power_annihilation_exponent(module, var_indices, cap=64, budget=None):
    """Smallest t with (vars)^t annihilating the module (None if > cap)."""
    ring = module.ring
    if module.rank == 0:
        return 0
    gb = module.gb(budget)
    one = _one(ring.p)
    for t in range(cap + 1):
        ok = True
        for beta in monomials_of_degree(len(var_indices), t):
            e = [0] * ring.nvars
            for vi, b in zip(var_indices, beta):
                e[vi] = b
            e = tuple(e)
            for k in range(module.rank):
                if not gb.contains({(k, e): one}, budget):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return t
    return None


def a_invariant(module, i, budget=None, scan_span=40):
    """a^i_{S_+}(M): top degree of the i-th fiber local cohomology."""
    ring = module.ring
    n = ring.n
    if i < 0 or i > max(n, 0):
        return NEG_INF
    if module.is_zero(budget):
        return NEG_INF
    if i == 0:
        h0 = fiber_torsion(module, budget)
        if h0.is_zero(budget):
            return NEG_INF
        t = _power_annihilation_exponent(h0, list(range(n)), budget=budget)
        if t is None:
            raise TripwireError("fiber torsion module is not S_+-power torsion")
        upper = h0.max_fiber_twist() + max(0, (t - 1)) * max(n, 1)
        top = top_fiber_degree(h0, upper, budget)
        if top is None:
            raise TripwireError("nonzero torsion module with no nonzero slice")
        return top
    res = resolution_of(module, budget)
    if ring.m == 0 and not ring.base_rels:
        ext = ext_module(res, n - i, budget)
        if ext.is_zero(budget):
            return NEG_INF
        indeg = bottom_fiber_degree(ext, budget)
        val = -indeg - n
        if local_cohomology_slice(res, i, val, budget).is_zero(budget):
            raise TripwireError("duality and dual-slice routes disagree at a^%d" % i)
        if not local_cohomology_slice(res, i, val + 1, budget).is_zero(budget):
            raise TripwireError("dual-slice route contradicts the computed a^%d" % i)
        return val
    start = regularity(module, budget).value
    if start == NEG_INF:
        return NEG_INF
    start = int(start) - i
    for nu in range(start, start - scan_span - 1, -1):
        if not local_cohomology_slice(res, i, nu, budget).is_zero(budget):
            return nu
    for q in range(n - i, len(res.twists)):
        if not ext_module(res, q, budget).is_zero(budget):
            raise InconclusiveError(
                "a^%d not located within %d degrees below reg" % (i, scan_span))
    return NEG_INF


# ----------------------------------------------------------------- regularity

class RegularityResult:
    """Regularity with per-method values and witnesses; methods must agree."""

    def __init__(self, value, methods, witnesses):
        self.value = value
        self.methods = methods
        self.witnesses = witnesses

    def __repr__(self):
        return "RegularityResult(%r, methods=%r)" % (self.value, sorted(self.methods))


def _sup_from_homology(module, shift, budget):
    """max over nonzero fiber slices mu of (mu + shift), -inf for zero."""
    best = NEG_INF
    if module.rank == 0:
        return best, None
    lo = module.min_fiber_twist()
    hi = module.max_fiber_twist()
    wit = None
    for mu in range(hi, lo - 1, -1):
        if slice_nonzero(module, mu, budget):
            if mu + shift > best:
                best = mu + shift
                wit = mu
            break  # slices of an S_+-annihilated module: the top one suffices
    return best, wit


def _koszul_reg(module, cohomological, budget):
    ring = module.ring
    xs = [ring.var(v) for v in ring.fiber_vars]
    best = NEG_INF
    witness = None
    if not xs:
        kc = None
        top = top_fiber_degree(module, module.max_fiber_twist(), budget)
        if top is not None:
            best, witness = top, (0, top)
        return best, witness
    kc = koszul_complex(ring, xs, module, cohomological=cohomological)
    for idx in range(ring.n + 1):
        hom = kc.cohomology(idx, budget)
        shift = idx if cohomological else -idx
        val, wit = _sup_from_homology(hom, shift, budget)
        if val > best:
            best = val
            witness = (idx, wit)
    return best, witness


def _betti_reg(module, budget):
    """sup over Tor_i(M, S/S_+) via a minimal free resolution."""
    ring = module.ring
    res = resolution_of(module, budget)
    L = len(res.twists) - 1
    one = _one(ring.p)
    xcols = []
    spots = []
    for h in range(L, -1, -1):
        tw = res.twists[h]
        rels = []
        for j in range(len(tw)):
            for v in range(ring.n):
                e = [0] * ring.nvars
                e[v] = 1
                rels.append({(j, tuple(e)): one})
        spots.append((list(tw), rels))
    diffs = []
    nmask = ring.n
    for h in range(L, 0, -1):
        cols = []
        for col in res.maps[h - 1].cols:
            cols.append({(pos, e): c for (pos, e), c in col.items()
                         if not any(e[:nmask])})
        diffs.append(cols)
    chain = PresentedComplex(ring, spots, diffs, graded="bigraded")
    best = NEG_INF
    witness = None
    for i in range(L + 1):
        hom = chain.homology(L - i, budget)
        val, wit = _sup_from_homology(hom, -i, budget)
        if val > best:
            best = val
            witness = (i, wit)
    return best, witness


def regularity(module, budget=None, require_all=False):
    """Castelnuovo-Mumford regularity with respect to the fiber ideal.

    Over a polynomial base all three routes run (resolution Tor, Koszul
    homology, Koszul cohomology) and must agree exactly; over a quotient
    base only the two Koszul routes run.
    """
    key = "reg"
    if key in module._cache:
        return module._cache[key]
    methods = {}
    witnesses = {}
    v_h, w_h = _koszul_reg(module, False, budget)
    methods["koszul-homology"] = v_h
    witnesses["koszul-homology"] = w_h
    v_c, w_c = _koszul_reg(module, True, budget)
    methods["koszul-cohomology"] = v_c
    witnesses["koszul-cohomology"] = w_c
    if not module.ring.base_rels:
        v_b, w_b = _betti_reg(module, budget)
        methods["betti"] = v_b
        witnesses["betti"] = w_b
    elif require_all:
        raise ScopeError("the resolution route needs a polynomial base")
    vals = set(methods.values())
    if len(vals) != 1:
        raise TripwireError("regularity methods disagree: %r" % (methods,))
    out = RegularityResult(vals.pop(), methods, witnesses)
    module._cache[key] = out
    return out


def depth_splus(module, budget=None):
    """depth_{S_+}(M) by Koszul cohomology on the fiber variables."""
    ring = module.ring
    xs = [ring.var(v) for v in ring.fiber_vars]
    return depth_wrt([x.terms for x in xs], module, budget)


# ---------------------------------------------------------------------- depth

def depth_wrt(ideal_gens, module, budget=None):
    """depth_I(M) = least nonvanishing Koszul cohomology index, else +inf."""
    ring = module.ring
    gens = [g.terms if hasattr(g, "terms") else dict(g) for g in ideal_gens]
    gens = [g for g in gens if g]
    if module.is_zero(budget):
        return POS_INF
    kc = koszul_complex(ring, gens, module, cohomological=True)
    for i in range(len(gens) + 1):
        if not kc.cohomology(i, budget).is_zero(budget):
            return i
    return POS_INF


def depth_ext_oracle(ideal_gens, module, budget=None):
    """grade via min{ i : Ext^i(R/I, M) != 0 }, the classical oracle."""
    ring = module.ring
    gens = [g.terms if hasattr(g, "terms") else dict(g) for g in ideal_gens]
    gens = [g for g in gens if g]
    if module.is_zero(budget):
        return POS_INF
    icols = [{(k, e): c for e, c in g.items()} for g in gens
             for k in range(module.rank)]
    if quotient_presentation(module, icols, budget).is_zero(budget):
        return POS_INF  # M = IM
    # R-free resolution of R/I
    ranks = [1]
    maps = []
    cols = [{(0, e): c for e, c in g.items()} for g in gens]
    depth_cap = ring.nvars + 1
    while cols and len(maps) < depth_cap:
        maps.append(PolyMatrix(ring, ranks[-1], None, cols, None, graded=False))
        ranks.append(len(cols))
        cols = syzygies(ring, cols, ranks[-2], budget=budget,
                        over_quotient=bool(ring.base_rels))
    chain = hom_complex_into(ranks, maps, module, budget)
    for i in range(len(ranks)):
        if not chain.homology(i, budget).is_zero(budget):
            return i
    raise TripwireError("Ext oracle found no nonvanishing index")


class NorthcottCertificate:
    def __init__(self, ok, elements, failed_step=None):
        self.ok = ok
        self.elements = elements
        self.failed_step = failed_step

    def __repr__(self):
        if self.ok:
            return "NorthcottCertificate(length %d)" % len(self.elements)
        return "NorthcottCertificate(failed at step %d)" % self.failed_step


def northcott_certificate(ideal_gens, module, r, budget=None):
    """Explicit regular sequence of length r on M[T..] inside I A[T..].

    Each f_i is the generic T-linear combination of the ideal generators
    with its own block of fresh T variables; every step is verified by an
    annihilator computation and failures report the failing step.
    """
    ring = module.ring
    gens = [ring.poly(g.terms if hasattr(g, "terms") else g) for g in ideal_gens]
    if r == 0:
        return NorthcottCertificate(True, [])
    s = len(gens)
    tnames = ["T%d_%d" % (i + 1, j + 1) for i in range(r) for j in range(s)]
    ctx = ring.extend_base(tnames)
    pad = len(tnames)
    prom_cols = [{(pos, e + (0,) * pad): c for (pos, e), c in col.items()}
                 for col in module.rel_cols]
    cur = ModulePresentation(ctx, [None] * module.rank, prom_cols, graded="none",
                             adjoin_base_rels=False)
    fs = []
    for i in range(r):
        f = ctx.zero()
        for j, g in enumerate(gens):
            tvar = ctx.var("T%d_%d" % (i + 1, j + 1))
            f = f + tvar * ring.promote(g, ctx)
        if not is_nonzerodivisor(cur, f.terms, budget):
            return NorthcottCertificate(False, fs, failed_step=i + 1)
        fs.append(f)
        fcols = [{(k, e): c for e, c in f.terms.items()} for k in range(cur.rank)]
        cur = quotient_presentation(cur, fcols, budget)
    return NorthcottCertificate(True, fs)


# ------------------------------------------------------------------------- cd

class DepthCdResult:
    """Depth and cohomological dimension, the latter exact or an interval."""

    def __init__(self, depth=None, cd_lo=None, cd_hi=None, exact=False,
                 witnesses=None):
        self.depth = depth
        self.cd_lo = cd_lo
        self.cd_hi = cd_hi
        self.exact = exact
        self.witnesses = witnesses or {}

    @property
    def cd(self):
        if not self.exact:
            raise GstabError("cd is not exact here; use the interval")
        return self.cd_lo

    def __repr__(self):
        if self.exact:
            return "DepthCdResult(depth=%r, cd=%r)" % (self.depth, self.cd_lo)
        return "DepthCdResult(depth=%r, cd in [%r, %r])" % (
            self.depth, self.cd_lo, self.cd_hi)


def _cech_pattern_cd(ring, supports, universe, p):
    """Exact cd of a squarefree monomial ideal on k[universe] by sign patterns.

    For each set Z of variables with negative exponents, the multidegree
    component of the Cech complex has a 0/1 entry per subset T of the
    generators according to Z being covered by T's support; ranks over the
    coefficient field give the cohomology.
    """
    s = len(supports)
    best = NEG_INF
    universe = list(universe)
    for zsize in range(len(universe) + 1):
        for zc in itertools.combinations(universe, zsize):
            z = frozenset(zc)
            comps = []
            for psize in range(s + 1):
                comps.append([T for T in itertools.combinations(range(s), psize)
                              if z <= frozenset().union(*(supports[t] for t in T))])
            dims = [len(c) for c in comps]
            ranks = []
            one = _one(p)
            for psize in range(s):
                src = {T: k for k, T in enumerate(comps[psize])}
                tgt = {T: k for k, T in enumerate(comps[psize + 1])}
                rows = []
                for T, krow in src.items():
                    row = {}
                    for l in range(s):
                        if l in T:
                            continue
                        newT = tuple(sorted(T + (l,)))
                        if newT not in tgt:
                            continue
                        sgn = sum(1 for t in T if t < l)
                        c = one if sgn % 2 == 0 else (p - 1 if p else Fraction(-1))
                        row[tgt[newT]] = c
                    rows.append(row)
                ranks.append(linrank(rows, p))
            for i in range(s + 1):
                rk_out = ranks[i] if i < s else 0
                rk_in = ranks[i - 1] if i >= 1 else 0
                if dims[i] - rk_out - rk_in > 0 and i > best:
                    best = i
    return best


def _monomial_min_primes(ring, ideal_terms, budget):
    gens = monomial_ideal_gens(ring, ideal_terms, budget)
    return minimal_primes_of_monomial(ring, gens)


def cd_wrt(ideal_gens, module, budget=None):
    """cd_I(M): exact in the squarefree-monomial regime, else an interval.

    Exact route: minimal primes of the annihilator (monomial), and for
    each quotient prime the sign-pattern Cech evaluation of the surviving
    generators; the maximum over minimal primes is cd (reduction to
    cyclic quotients by minimal primes).
    """
    ring = module.ring
    gens = [g.terms if hasattr(g, "terms") else dict(g) for g in ideal_gens]
    gens = [g for g in gens if g]
    if module.is_zero(budget):
        return DepthCdResult(depth=POS_INF, cd_lo=NEG_INF, cd_hi=NEG_INF, exact=True)
    unit = ideal_gb(ring, gens, budget) if gens else None
    if unit is not None and unit.vectors and any(
            e == (0,) * ring.nvars for v in unit.vectors for (_p, e) in v):
        return DepthCdResult(depth=POS_INF, cd_lo=NEG_INF, cd_hi=NEG_INF, exact=True)

    exact_ok = True
    if not gens:
        return DepthCdResult(depth=0, cd_lo=0, cd_hi=0, exact=True,
                             witnesses={"reason": "zero ideal"})
    if not ideal_is_monomial(ring, gens, budget):
        exact_ok = False
    ann = module.annihilator(budget)
    full_ann = ann + [dict(t) for t in ring.base_rels]
    if exact_ok and not ideal_is_monomial(ring, full_ann, budget):
        exact_ok = False
    if exact_ok:
        igens = [squarefree_part(e) for e in monomial_ideal_gens(ring, gens, budget)]
        isupports = [mono_support(e) for e in igens]
        primes = _monomial_min_primes(ring, full_ann, budget)
        best = NEG_INF
        wit = None
        for P in primes:
            universe = [v for v in range(ring.nvars) if v not in P]
            surv = [sup for sup in isupports if sup <= frozenset(universe)]
            if not surv:
                val = 0
            else:
                val = _cech_pattern_cd(ring, surv, universe, ring.p)
                if val == NEG_INF:
                    raise TripwireError("pattern evaluation found no cohomology "
                                        "for a nonzero proper monomial ideal")
            if val > best:
                best = val
                wit = sorted(P)
        return DepthCdResult(depth=None, cd_lo=best, cd_hi=best, exact=True,
                             witnesses={"minimal_prime": wit})
    d = depth_wrt(gens, module, budget)
    if d == POS_INF:
        return DepthCdResult(depth=POS_INF, cd_lo=NEG_INF, cd_hi=NEG_INF, exact=True)
    pruned = _prune_redundant(ring, gens, budget)
    hi = min(len(pruned), max(module_dimension(module, budget), 0))
    if hi < d:
        raise TripwireError("cd upper bound fell below depth")
    return DepthCdResult(depth=d, cd_lo=d, cd_hi=hi, exact=False)


def _prune_redundant(ring, gens, budget):
    kept = list(gens)
    changed = True
    while changed and len(kept) > 1:
        changed = False
        for i in range(len(kept)):
            others = kept[:i] + kept[i + 1:]
            gb = ideal_gb(ring, others, budget)
            if gb.contains({(0, e): c for e, c in kept[i].items()}, budget):
                kept = others
                changed = True
                break
    return kept


def cd_exact(ideal_gens, module, budget=None):
    res = cd_wrt(ideal_gens, module, budget)
    if not res.exact:
        raise ScopeError("exact cd is only available in the monomial regime")
    return res.cd_lo


def _ideal_power_annihilates(module, a_terms, cap=16, budget=None):
    from .modules import ideal_power
    ring = module.ring
    gb = module.gb(budget)
    for t in range(1, cap + 1):
        prods = ideal_power(ring, a_terms, t)
        if all(gb.contains({(k, e): c for e, c in f.items()}, budget)
               for f in prods for k in range(module.rank)):
            return True
    return False


def cd_identities_check(module, i_gens, j_gens=None, ses=None, a_gens=None,
                        budget=None):
    """Exact checks of the cd (in)equalities in the monomial regime.

    ses, when given, is a pair (sub, quotient) presenting a short exact
    sequence around `module`; a_gens an ideal with a power annihilating it.
    """
    ring = module.ring
    report = {}
    cdI = cd_exact(i_gens, module, budget)
    report["cd_I"] = cdI
    if j_gens is not None:
        cdJ = cd_exact(j_gens, module, budget)
        cdIJ = cd_exact(list(i_gens) + list(j_gens), module, budget)
        report["cd_J"] = cdJ
        report["cd_I_plus_J"] = cdIJ
        report["sum_bound_holds"] = bool(cdIJ <= cdJ + cdI)
    if ses is not None:
        sub, quot = ses
        cds = cd_exact(i_gens, sub, budget)
        cdq = cd_exact(i_gens, quot, budget)
        report["cd_sub"] = cds
        report["cd_quot"] = cdq
        both = max(cds, cdq)
        report["ses_bound_holds"] = bool(cdI <= both)
        report["ses_equality_holds"] = bool(cdI == both)
    if a_gens is not None:
        aterms = [g.terms if hasattr(g, "terms") else dict(g) for g in a_gens]
        if not _ideal_power_annihilates(module, aterms, budget=budget):
            raise ScopeError("the given ideal has no power annihilating M")
        acols = []
        for g in a_gens:
            terms = g.terms if hasattr(g, "terms") else g
            for k in range(module.rank):
                acols.append({(k, e): c for e, c in terms.items()})
        quo = quotient_presentation(module, acols, budget)
        cdq = cd_exact(i_gens, quo, budget)
        report["cd_mod_a"] = cdq
        report["annihilator_equality_holds"] = bool(cdq == cdI)
    return report


# ------------------------------------------------------------------------ Ass

class PrimeIdeal:
    """Monomial prime (variable subset) or asserted candidate prime."""

    def __init__(self, ring, var_subset=None, gens=None, asserted=False):
        self.ring = ring
        self.var_subset = frozenset(var_subset) if var_subset is not None else None
        if gens is None:
            gens = [ring.var(ring.names()[i]) for i in sorted(self.var_subset)]
        self.gens = [ring.poly(g.terms if hasattr(g, "terms") else g) for g in gens]
        self.monomial = self.var_subset is not None
        self.asserted = asserted
        if self.monomial:
            self.dim = ring.nvars - len(self.var_subset)
        else:
            self.dim = ideal_dimension(ring, [g.terms for g in self.gens])

    def gen_terms(self):
        return [g.terms for g in self.gens]

    def key(self):
        if self.monomial:
            return (0, tuple(sorted(self.var_subset)))
        return (1, tuple(sorted(tuple(sorted(g.terms.items())) for g in self.gens)))

    def contract_to_base(self):
        """P cap k[base vars] for a monomial prime of the full ring."""
        if not self.monomial:
            raise ScopeError("contraction implemented for monomial primes only")
        base = self.ring.base_context()
        keep = sorted(i - self.ring.n for i in self.var_subset if i >= self.ring.n)
        return PrimeIdeal(base, var_subset=keep)

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.monomial:
            names = self.ring.names()
            return "(%s)" % ", ".join(names[i] for i in sorted(self.var_subset))
        return "(%s)" % ", ".join(repr(g) for g in self.gens)


def multidegree_offsets(module):
    """Consistent fine multidegrees for the generators, or None.

    Every relation entry must be a single term and the implied multidegree
    differences must be simultaneously satisfiable.
    """
    ring = module.ring
    nv = ring.nvars
    offsets = [None] * module.rank
    adj = [[] for _ in range(module.rank)]
    for col in module.rel_cols:
        rows = []
        for (pos, e), _c in col.items():
            rows.append((pos, e))
        for (p1, e1) in rows:
            for (p2, e2) in rows:
                adj[p1].append((p2, tuple(a - b for a, b in zip(e1, e2))))
        if any(sum(1 for (pos2, _e) in col if pos2 == pos) > 1
               for (pos, _e) in col):
            return None
    for start in range(module.rank):
        if offsets[start] is not None:
            continue
        offsets[start] = (0,) * nv
        stack = [start]
        while stack:
            v = stack.pop()
            for (w, delta) in adj[v]:
                cand = tuple(a + b for a, b in zip(offsets[v], delta))
                if offsets[w] is None:
                    offsets[w] = cand
                    stack.append(w)
                elif offsets[w] != cand:
                    return None
    return offsets


def _membership_test(module, prime, budget=None):
    """ann(0 :_N p) == p, the exact associatedness criterion."""
    ring = module.ring
    pgens = prime.gen_terms()
    w = colon_submodule(ring, module.rel_cols, module.rank, pgens, budget)
    gb = module.gb(budget)
    wit = [v for v in w if not gb.contains(v, budget)]
    if not wit:
        return False  # (0 : p) = 0 inside N
    cur = None
    for v in wit:
        ci = colon_ideal(ring, module.rel_cols, module.rank, v, budget)
        cur = ci if cur is None else _ideal_intersect_terms(ring, cur, ci, budget)
    return _ideal_equal(ring, cur, pgens, budget)


def _ideal_intersect_terms(ring, a, b, budget):
    from .modules import ideal_intersection
    return ideal_intersection(ring, a, b, budget)


def _ideal_equal(ring, a, b, budget):
    gba = ideal_gb(ring, a, budget)
    gbb = ideal_gb(ring, b, budget)
    ok = all(gba.contains({(0, e): c for e, c in f.items()}, budget) for f in b)
    return ok and all(gbb.contains({(0, e): c for e, c in f.items()}, budget) for f in a)


def ass_primes(module, candidates=None, budget=None):
    """Associated primes of a presented module.

    Exact mode (no candidates): the module must be finely multigraded over
    a polynomial ring, so candidates are the variable-subset primes and the
    membership test decides each.  Candidate mode tests exactly the primes
    supplied and does not claim completeness.
    """
    ring = module.ring
    if module.is_zero(budget):
        return []
    if candidates is None:
        if ring.base_rels:
            raise ScopeError("exact Ass needs a polynomial ring; pass candidates")
        if multidegree_offsets(module) is None:
            raise ScopeError("exact Ass needs a finely multigraded module; "
                             "pass candidates")
        cands = [PrimeIdeal(ring, var_subset=sub)
                 for size in range(ring.nvars + 1)
                 for sub in itertools.combinations(range(ring.nvars), size)]
    else:
        cands = []
        for c in candidates:
            if isinstance(c, PrimeIdeal):
                cands.append(c)
            else:
                cands.append(PrimeIdeal(ring, gens=c, asserted=True))
        for c in cands:
            if c.asserted and not _cheap_prime_checks(ring, c, budget):
                raise GstabError("candidate %r fails the cheap primality checks" % c)
    out = [p for p in cands if _membership_test(module, p, budget)]
    return sorted(out, key=lambda p: p.key())


def _cheap_prime_checks(ring, prime, budget):
    gb = ideal_gb(ring, prime.gen_terms(), budget)
    zero = (0,) * ring.nvars
    if any(e == zero for v in gb.vectors for (_pos, e) in v):
        return False  # unit ideal
    names = ring.names()
    for a, b in itertools.combinations_with_replacement(range(ring.nvars), 2):
        prod = ring.var(names[a]) * ring.var(names[b])
        if gb.contains({(0, e): c for e, c in prod.terms.items()}, budget):
            ina = gb.contains({(0, e): c for e, c in ring.var(names[a]).terms.items()}, budget)
            inb = gb.contains({(0, e): c for e, c in ring.var(names[b]).terms.items()}, budget)
            if not (ina or inb):
                return False
    return True


# -------------------------------------------------- support-dimension torsion

def monomial_intersection(ring, exps_a, exps_b):
    out = []
    for a in exps_a:
        for b in exps_b:
            out.append(K.mono_lcm(a, b))
    # minimalize
    out = sorted(set(out), key=lambda e: (K.mono_deg(e), e))
    kept = []
    for e in out:
        if not any(K.mono_divides(f, e) for f in kept):
            kept.append(e)
    return kept


def h0_support_dim(module, i, budget=None):
    """Largest submodule supported in dimension <= i (monomial scope).

    Saturates with respect to the intersection of the associated primes of
    dimension at most i; the empty intersection is the unit ideal, giving
    the zero submodule.
    """
    ring = module.ring
    ass = ass_primes(module, budget=budget)
    small = [p for p in ass if p.dim <= i]
    one = _one(ring.p)
    if not small:
        return ModulePresentation(ring, [], [], graded=module.graded,
                                  adjoin_base_rels=False)
    exps = None
    for p in small:
        pexps = []
        for vi in sorted(p.var_subset):
            e = [0] * ring.nvars
            e[vi] = 1
            pexps.append(tuple(e))
        if not pexps:
            pexps = []
        exps = pexps if exps is None else monomial_intersection(ring, exps, pexps)
    if exps is None or not exps:
        # some associated prime is the zero ideal with dim <= i: whole module
        return module
    cgens = [{e: one} for e in exps]
    return h0_presentation(module, cgens, budget)


# ---------------------------------------------------------------- localization

def localize_monomial(module, var_subset, budget=None):
    """Invert the base variables outside var_subset (set them to 1).

    Needs term relations (fine multigrading); the fiber grading survives,
    the base grading is coarsened away.
    """
    ring = module.ring
    keep = sorted(var_subset)
    if module.rel_cols and multidegree_offsets(module) is None:
        raise ScopeError("monomial localization needs a finely multigraded module")
    if any(len(rel) != 1 for rel in ring.base_rels):
        raise ScopeError("monomial localization needs monomial base relations")
    new_base = tuple(ring.base_vars[k] for k in keep)
    new_rels = []
    ring_zero = False
    for rel in ring.base_rels:
        sub = {}
        for e, c in rel.items():
            ne = tuple(e[ring.n + k] for k in keep)
            sub[ne] = c
        if list(sub.keys()) == [(0,) * len(keep)]:
            ring_zero = True
        new_rels.append(sub)
    ctx = RingContext(ring.field, ring.fiber_vars, new_base,
                      () if ring_zero else new_rels, order=ring.order)
    if ring_zero:
        return ModulePresentation(ctx, [], [], graded="none",
                                  adjoin_base_rels=False)
    cols = []
    for col in module.rel_cols:
        nc = {}
        for (pos, e), c in col.items():
            ne = e[:ring.n] + tuple(e[ring.n + k] for k in keep)
            if ne in nc:
                raise ScopeError("terms collide under localization; "
                                 "module is not finely multigraded")
            nc[(pos, ne)] = c
        cols.append(nc)
    if module.graded in ("bigraded", "fiber") and ring.n > 0:
        tw = [(t[0], 0) for t in module.gen_twists]
        mode = "fiber"
    else:
        tw = [None] * module.rank
        mode = "none"
    return ModulePresentation(ctx, tw, cols, graded=mode, adjoin_base_rels=False)


def localize_poly(ring, terms, var_subset):
    keep = sorted(var_subset)
    out = {}
    for e, c in terms.items():
        ne = e[:ring.n] + tuple(e[ring.n + k] for k in keep)
        prev = out.get(ne, 0)
        s = prev + c if not ring.p else (prev + c) % ring.p
        if s:
            out[ne] = s
        else:
            out.pop(ne, None)
    return out


# --------------------------------------------------------- generic coordinates

def _invertible_scalar(matrix, p):
    """Full-rank test for a small scalar matrix, exact."""
    n = len(matrix)
    rows = [dict((j, v) for j, v in enumerate(r) if v) for r in matrix]
    return linrank(rows, p) == n


def generic_coordinates(module, seed, verify=None, retries=5, budget=None):
    """Random invertible linear change on the fiber variables.

    Retries with derived seeds when the downstream `verify` callback
    rejects the transformed module; the transcript records the matrix.
    """
    ring = module.ring
    n = ring.n
    p = ring.p
    if p and p < retries * max(n * n, 1):
        raise GstabError("field too small for the requested genericity retries")
    rng = random.Random(seed)
    attempts = []
    for attempt in range(retries):
        while True:
            if p:
                mat = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            else:
                mat = [[Fraction(rng.randint(-9, 9)) for _ in range(n)]
                       for _ in range(n)]
            if n == 0 or _invertible_scalar(mat, p):
                break
        new = transform_fiber(module, mat)
        attempts.append(mat)
        if verify is None or verify(new):
            return new, {"seed": seed, "matrix": mat, "attempts": attempt + 1}
    raise GstabError("genericity verification failed %d times" % retries)


def transform_fiber(module, mat):
    """Apply x_i -> sum_j mat[i][j] x_j to every relation entry."""
    ring = module.ring
    n = ring.n
    if n == 0:
        return module
    images = {}
    for i in range(n):
        f = ring.zero()
        for j in range(n):
            if mat[i][j]:
                f = f + ring.var(ring.fiber_vars[j]).scale(mat[i][j])
        images[i] = f
    cols = []
    for col in module.rel_cols:
        nc = {}
        for (pos, e), c in col.items():
            poly = ring.poly({e: c}).substitute(images)
            for ee, cc in poly.terms.items():
                key = (pos, ee)
                prev = nc.get(key, 0)
                s = prev + cc if not ring.p else (prev + cc) % ring.p
                if s:
                    nc[key] = s
                else:
                    nc.pop(key, None)
        if nc:
            cols.append(nc)
    return ModulePresentation(ring, module.gen_twists, cols, graded=module.graded,
                              adjoin_base_rels=False)
