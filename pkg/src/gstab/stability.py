"""Degree-window profiles and eventual-stability certificates.

Each profile computes a per-degree invariant of the slices M_mu together
with the thresholds that the stability theorems promise, and renders
verdicts.  A FAIL verdict on a proved theorem is a tripwire: it indicates
an artifact bug, never a property of the input.
"""

from fractions import Fraction

from .errors import GstabError, ScopeError
from .complexes import local_cohomology_slice
from .invariants import (NEG_INF, POS_INF, a_invariant, ass_primes, cd_wrt,
                         depth_splus, depth_wrt, fiber_torsion, h0_support_dim,
                         localize_monomial, localize_poly, regularity,
                         resolution_of, _power_annihilation_exponent)
from .modules import ModulePresentation, h0_presentation, quotient_presentation
from .slices import graded_slice, slice_nonzero

CONFIRM_SPAN = 5


class Verdict:
    def __init__(self, name, status, window=None, witness=None, details=None):
        self.name = name
        self.status = status  # PASS | FAIL | INCONCLUSIVE
        self.window = window
        self.witness = witness
        self.details = details or {}

    def to_dict(self):
        return {"name": self.name, "status": self.status, "window": self.window,
                "witness": self.witness, "details": self.details}

    def __repr__(self):
        return "Verdict(%s: %s)" % (self.name, self.status)


class StabilityReport:
    def __init__(self, thresholds, profiles, verdicts, scope=None):
        self.thresholds = thresholds
        self.profiles = profiles
        self.verdicts = verdicts
        self.scope = scope or {}

    def to_dict(self):
        return {"thresholds": self.thresholds,
                "profiles": self.profiles,
                "verdicts": [v.to_dict() for v in self.verdicts],
                "scope": self.scope}

    def all_pass(self):
        return all(v.status == "PASS" for v in self.verdicts)


def _enc(v):
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "+inf"
    return v


def core_thresholds(module, budget=None):
    """reg, a^0, depth_{S_+}, r = reg - depth, and the cd-stability bound."""
    reg = regularity(module, budget).value
    a0 = a_invariant(module, 0, budget)
    dsp = depth_splus(module, budget)
    n = module.ring.n
    if reg == NEG_INF or dsp == POS_INF:
        r = NEG_INF
        bound = NEG_INF
    else:
        r = reg - dsp
        bound = reg + n - dsp
    return {"reg": reg, "a0": a0, "depth_splus": dsp, "r": r,
            "stabcd_bound": bound}


# --------------------------------------------------------------- depth profile

def depth_profile(module, ideal_gens, window=None, budget=None,
                  confirm=CONFIRM_SPAN):
    """mu -> depth_I(M_mu), with the eventual-stability verdict.

    Beyond r = reg - depth_{S_+} every fiber piece of the local cohomology
    vanishes, so the profile is non-increasing there; d is its minimum and
    mu0 the first degree attaining it, after which the profile must be
    constant.
    """
    th = core_thresholds(module, budget)
    r = th["r"]
    if window is None:
        lo = int(th["a0"]) - 2 if th["a0"] != NEG_INF else module.min_fiber_twist() - 2
        hi = (int(th["stabcd_bound"]) if th["stabcd_bound"] != NEG_INF
              else module.min_fiber_twist()) + 15
        window = (lo, hi)
    lo, hi = window
    profile = {}
    for mu in range(lo, hi + 1):
        sl = graded_slice(module, mu, budget)
        profile[mu] = depth_wrt(ideal_gens, sl.presentation, budget)
    verdicts = []
    if r == NEG_INF:
        tail = {mu: v for mu, v in profile.items()}
    else:
        tail = {mu: v for mu, v in profile.items() if mu > r}
    if not tail or max(tail) - min(tail) + 1 < confirm:
        verdicts.append(Verdict("assdepth2", "INCONCLUSIVE", window=window,
                                details={"reason": "window does not reach past r",
                                         "r": _enc(r)}))
        return profile, th, verdicts
    d = min(tail.values())
    mu0 = min(mu for mu, v in tail.items() if v == d)
    nonincreasing = all(tail[mu] >= tail[mu + 1]
                        for mu in sorted(tail)[:-1])
    constant_from_mu0 = all(v == d for mu, v in tail.items() if mu >= mu0)
    if max(tail) - mu0 + 1 < confirm:
        verdicts.append(Verdict("assdepth2", "INCONCLUSIVE", window=window,
                                details={"reason": "fewer than %d degrees beyond mu0"
                                         % confirm, "mu0": mu0}))
    elif nonincreasing and constant_from_mu0:
        verdicts.append(Verdict("assdepth2", "PASS", window=window,
                                witness={"d": _enc(d), "mu0": mu0, "r": _enc(r)}))
    else:
        bad = [mu for mu in sorted(tail)[:-1] if tail[mu] < tail[mu + 1]]
        bad += [mu for mu, v in tail.items() if mu >= mu0 and v != d]
        verdicts.append(Verdict("assdepth2", "FAIL", window=window,
                                witness={"violating_degrees": sorted(set(bad))}))
    th = dict(th)
    th["d"] = _enc(d)
    th["mu0"] = mu0
    return profile, th, verdicts


# ------------------------------------------------------------------ cd profile

def cd_profile(module, ideal_gens, window=None, budget=None):
    """mu -> cd_I(M_mu) (exact or interval) with the two stabcd verdicts."""
    th = core_thresholds(module, budget)
    a0 = th["a0"]
    bound = th["stabcd_bound"]
    if window is None:
        lo = (int(a0) if a0 != NEG_INF else module.min_fiber_twist()) - 2
        hi = (int(bound) if bound != NEG_INF else module.min_fiber_twist()) + 15
        window = (lo, hi)
    lo, hi = window
    profile = {}
    all_exact = True
    for mu in range(lo, hi + 1):
        sl = graded_slice(module, mu, budget)
        res = cd_wrt(ideal_gens, sl.presentation, budget)
        profile[mu] = res
        all_exact = all_exact and res.exact
    verdicts = []
    n = module.ring.n

    def val(mu):
        return profile[mu].cd_lo if profile[mu].exact else None

    mono_range = [mu for mu in range(lo, hi) if a0 == NEG_INF or mu > a0]
    if all_exact:
        bad_a = [mu for mu in mono_range if mu + 1 <= hi
                 and val(mu) > val(mu + 1)]
        verdicts.append(Verdict("stabcd_nondecreasing",
                                "PASS" if not bad_a else "FAIL",
                                window=window,
                                witness=None if not bad_a else
                                {"violating_degrees": bad_a},
                                details={"a0": _enc(a0)}))
        if bound == NEG_INF or n == 0:
            verdicts.append(Verdict("stabcd_constant", "INCONCLUSIVE",
                                    window=window,
                                    details={"reason": "bound undefined (zero module or n=0)"}))
        elif hi < bound:
            verdicts.append(Verdict("stabcd_constant", "INCONCLUSIVE",
                                    window=window,
                                    details={"reason": "window below the bound",
                                             "bound": _enc(bound)}))
        else:
            vals = {val(mu) for mu in range(max(lo, int(bound)), hi + 1)}
            verdicts.append(Verdict("stabcd_constant",
                                    "PASS" if len(vals) == 1 else "FAIL",
                                    window=window,
                                    witness={"bound": _enc(bound),
                                             "values": sorted(_enc(v) for v in vals)}))
    else:
        bad_lo = [mu for mu in mono_range if mu + 1 <= hi
                  and profile[mu].cd_lo > profile[mu + 1].cd_lo]
        bad_hi = [mu for mu in mono_range if mu + 1 <= hi
                  and profile[mu].cd_hi > profile[mu + 1].cd_hi]
        verdicts.append(Verdict("stabcd_bounds_monotone",
                                "PASS" if not (bad_lo and bad_hi) else "INCONCLUSIVE",
                                window=window,
                                details={"note": "exact cd unavailable; "
                                         "only interval bounds compared"}))
    return profile, th, verdicts


# ----------------------------------------------------------------- Ass profile

def _ass_key_set(primes):
    return frozenset(p.key() for p in primes)


def ass_profile(module, window, budget=None, confirm=CONFIRM_SPAN,
                candidates=None):
    """mu -> Ass_R(M_mu), monotonicity from torsion-free degrees, and the
    stabilization witness."""
    lo, hi = window
    h0 = fiber_torsion(module, budget)
    profile = {}
    sets = {}
    for mu in range(lo, hi + 1):
        sl = graded_slice(module, mu, budget)
        primes = ass_primes(sl.presentation, candidates=candidates, budget=budget)
        profile[mu] = primes
        sets[mu] = _ass_key_set(primes)
    h0_vanishes = {mu: not slice_nonzero(h0, mu, budget) for mu in range(lo, hi + 1)}
    verdicts = []
    bad = []
    for nu in range(lo, hi + 1):
        if not h0_vanishes[nu]:
            continue
        for mu in range(nu + 1, hi + 1):
            if not sets[nu] <= sets[mu]:
                bad.append((nu, mu))
    verdicts.append(Verdict("assymass_monotone", "PASS" if not bad else "FAIL",
                            window=window,
                            witness=None if not bad else {"violations": bad}))
    stab = None
    for mu in range(lo, hi - confirm + 1):
        if all(sets[mu] == sets[m2] for m2 in range(mu + 1, min(mu + confirm, hi) + 1)) \
                and mu + confirm <= hi:
            stab = mu
            break
    if stab is None:
        verdicts.append(Verdict("ass_stabilization", "INCONCLUSIVE", window=window,
                                details={"reason": "no %d-fold plateau in window"
                                         % confirm}))
    else:
        verdicts.append(Verdict("ass_stabilization", "PASS", window=window,
                                witness={"first_stable_degree": stab}))
    if candidates is not None:
        verdicts.append(Verdict("ass_completeness_caveat", "INCONCLUSIVE",
                                window=window,
                                details={"reason": "candidate mode cannot certify "
                                         "completeness of Ass sets"}))
    return profile, verdicts


def ass_union_check(module, window, budget=None):
    """Union of slice Ass over the window against contracted Ass_S(M)."""
    lo, hi = window
    profile, verdicts = ass_profile(module, window, budget)
    union = set()
    for primes in profile.values():
        union |= {tuple(sorted(p.var_subset)) for p in primes}
    full = ass_primes(module, budget=budget)
    contracted = set()
    n = module.ring.n
    for p in full:
        contracted.add(tuple(sorted(i - n for i in p.var_subset if i >= n)))
    ok = union == contracted
    stab_ok = any(v.name == "ass_stabilization" and v.status == "PASS"
                  for v in verdicts)
    window_covers_start = lo <= module.min_fiber_twist()
    if ok and stab_ok and window_covers_start:
        status = "PASS"
    elif not ok and stab_ok and window_covers_start:
        status = "FAIL"
    else:
        status = "INCONCLUSIVE"
    verdict = Verdict("assgraded_union", status, window=window,
                      witness={"slice_union": sorted(union),
                               "contracted": sorted(contracted)})
    return union, contracted, verdict


# --------------------------------------------------------------- length profile

def _finite_k_dimension(pres, torsion_exp, budget=None):
    """dim_k of a module annihilated by (all vars)^torsion_exp."""
    ring = pres.ring
    if pres.rank == 0:
        return 0
    from .modules import monomials_of_degree
    t = torsion_exp
    basis = {}
    for j in range(pres.rank):
        for d in range(t):
            for e in monomials_of_degree(ring.nvars, d):
                basis[(j, e)] = len(basis)
    rows = []
    from . import kernel as K
    for col in pres.rel_cols:
        for d in range(t + 1):
            for s in monomials_of_degree(ring.nvars, d):
                row = {}
                skip = False
                shifted = K.vec_term_mul(col, 1 if ring.p else Fraction(1), s, ring.p)
                for (pos, e), c in shifted.items():
                    idx = basis.get((pos, e))
                    if idx is not None:
                        row[idx] = c
                if row:
                    rows.append(row)
    from .linalg import rank as linrank
    return len(basis) - linrank(rows, ring.p)


def module_length(pres, budget=None, cap=64):
    """Length over the local ring at the irrelevant maximal ideal.

    Certifies a power of the variable ideal annihilating the module first;
    refuses when none exists below the cap (infinite length).
    """
    ring = pres.ring
    if pres.rank == 0 or pres.is_zero(budget):
        return 0
    t = _power_annihilation_exponent(pres, list(range(ring.nvars)), cap=cap,
                                     budget=budget)
    if t is None:
        raise ScopeError("module has infinite length over the local ring")
    return _finite_k_dimension(pres, t, budget)


def j_invariant(module, budget=None):
    """j(M) = max over contracted associated primes p of a^0 of H^0_p(M_p).

    Monomial scope; callers fall back to a^0_{S_+}(M) when unavailable.
    """
    full = ass_primes(module, budget=budget)
    n = module.ring.n
    best = NEG_INF
    for P in full:
        keep = sorted(i - n for i in P.var_subset if i >= n)
        loc = localize_monomial(module, keep, budget)
        if loc.rank == 0 or loc.is_zero(budget):
            continue
        pvars = [loc.ring.var(v).terms for v in loc.ring.base_vars]
        h0p = h0_presentation(loc, pvars, budget) if pvars else loc
        val = a_invariant(h0p, 0, budget)
        if val > best:
            best = val
    return best


def length_profile(module, p_subset, window, budget=None):
    """mu -> length of H^0_p((M_mu)_p), nondecreasing beyond j(M)."""
    lo, hi = window
    try:
        j = j_invariant(module, budget)
        j_src = "j"
    except ScopeError:
        j = a_invariant(module, 0, budget)
        j_src = "a0_fallback"
    profile = {}
    for mu in range(lo, hi + 1):
        sl = graded_slice(module, mu, budget)
        loc = localize_monomial(sl.presentation, p_subset, budget)
        if loc.rank == 0 or loc.is_zero(budget):
            profile[mu] = 0
            continue
        pvars = [loc.ring.var(v).terms for v in loc.ring.base_vars]
        h0p = h0_presentation(loc, pvars, budget) if pvars else loc
        profile[mu] = module_length(h0p, budget)
    bad = [mu for mu in range(lo, hi) if (j == NEG_INF or mu > j)
           and profile[mu] > profile[mu + 1]]
    verdict = Verdict("assympolass_length_monotone",
                      "PASS" if not bad else "FAIL",
                      window=window,
                      witness={"j": _enc(j), "j_source": j_src,
                               "violations": bad} if bad else
                      {"j": _enc(j), "j_source": j_src})
    return profile, verdict


# -------------------------------------------------------------- tameness scan

def tameness_scan(module, i, window, budget=None, confirm=CONFIRM_SPAN):
    """Vanishing pattern of H^i_{S_+}(M)_gamma over the window.

    Reports gamma0 such that the pattern is constant below gamma0 inside
    the window (the dimension <= 2 theorem guarantees one exists), or an
    explicit inconclusive verdict.
    """
    lo, hi = window
    res = resolution_of(module, budget)
    pattern = {}
    for gamma in range(lo, hi + 1):
        pres = local_cohomology_slice(res, i, gamma, budget)
        pattern[gamma] = not pres.is_zero(budget)
    first = pattern[lo]
    run = 0
    gamma0 = None
    for gamma in range(lo, hi + 1):
        if pattern[gamma] == first:
            run += 1
        else:
            gamma0 = gamma
            break
    if gamma0 is None:
        if run >= confirm:
            verdict = Verdict("tame_pattern", "PASS", window=window,
                              witness={"gamma0": hi + 1, "eventual": first,
                                       "note": "constant on the whole window"})
        else:
            verdict = Verdict("tame_pattern", "INCONCLUSIVE", window=window,
                              details={"reason": "window shorter than the "
                                       "confirmation span"})
        return pattern, (hi + 1 if run >= confirm else None), verdict
    if run >= confirm:
        verdict = Verdict("tame_pattern", "PASS", window=window,
                          witness={"gamma0": gamma0, "eventual": first})
        return pattern, gamma0, verdict
    verdict = Verdict("tame_pattern", "INCONCLUSIVE", window=window,
                      details={"reason": "only %d constant degrees at the "
                               "bottom of the window" % run})
    return pattern, None, verdict


def default_tame_window(module, budget=None):
    reg = regularity(module, budget).value
    n = module.ring.n
    base = int(reg) if reg != NEG_INF else 0
    return (-(abs(base) + 2 * n + 10), base + n + 10)


# ------------------------------------------------------------------ thresholds

def thresholds_record(module, ideal_gens=None, budget=None, depth_window_extent=15):
    """All computable stability thresholds, with scope annotations."""
    ring = module.ring
    th = core_thresholds(module, budget)
    out = {k: _enc(v) for k, v in th.items()}
    out["n"] = ring.n
    scope = {}
    if ideal_gens is not None:
        _profile, th2, verd = depth_profile(module, ideal_gens, budget=budget)
        out["d"] = th2.get("d", "unknown")
        out["mu0"] = th2.get("mu0", "unknown")
        scope["mu0"] = ("computed over the default window; INCONCLUSIVE "
                        "verdicts leave it unknown")
        if verd and verd[0].status == "INCONCLUSIVE":
            out["d"] = "unknown"
            out["mu0"] = "unknown"
    try:
        out["j"] = _enc(j_invariant(module, budget))
        scope["j"] = "exact (monomial scope)"
    except ScopeError:
        out["j"] = out["a0"]
        scope["j"] = "upper bound a0 (outside the monomial scope)"
    if ring.m == 0 and not ring.base_rels:
        out["tame"] = _tame_thresholds_dim0(module, budget)
        scope["tame"] = "field base (dimension 0)"
    else:
        out["tame"] = "out of scope"
        scope["tame"] = ("general Gorenstein bases are not computed; "
                        "restricted to field base")
    return out, scope


def _tame_thresholds_dim0(module, budget=None):
    """Theorem-tame thresholds A..E over a field base.

    With d = 0 the support-dimension filtration collapses, so every a^i_j,
    r^i_j with j >= 1 is -inf and the thresholds reduce to a-invariants and
    regularities of the Ext modules into the canonical module.
    """
    from .complexes import ext_module
    ring = module.ring
    n = ring.n
    res = resolution_of(module, budget)
    exts = {}
    for q in range(0, n + 2):
        e = ext_module(res, q, budget)
        exts[q] = e.shifted((n, 0))  # Ext into omega = S(-n)
    out = {}
    for i in range(0, n + 1):
        qa = n - i
        a0q = a_invariant(exts[qa], 0, budget) if qa in exts else NEG_INF
        r0q = (regularity(exts[qa], budget).value
               if qa in exts and not exts[qa].is_zero(budget) else NEG_INF)
        r0q1 = (regularity(exts[qa + 1], budget).value
                if qa + 1 in exts and not exts[qa + 1].is_zero(budget) else NEG_INF)
        A = a0q
        B = r0q
        C = A
        D = B
        E = max(A, r0q1 - 1 if r0q1 != NEG_INF else NEG_INF)
        out[i] = {"A": _enc(A), "B": _enc(B), "C": _enc(C), "D": _enc(D),
                  "E": _enc(E)}
    return out
