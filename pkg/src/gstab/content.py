"""Content ideals/submodules of polynomials in auxiliary variables, and the
generalized Dedekind-Mertens equality checked by Groebner membership.

A polynomial in auxiliary variables T over the ring (or over a module) is
a dict from T-exponent tuples to coefficients; ring coefficients are
BiPoly, module coefficients are free-module vector dicts.
"""

import itertools
from fractions import Fraction

from . import kernel as K
from .errors import ContextMismatchError, GstabError
from .groebner import buchberger
from .modules import ideal_power


class AuxPoly:
    """Polynomial in auxiliary T variables with ring or vector coefficients."""

    def __init__(self, ring, coeffs, module_rank=None):
        self.ring = ring
        self.module_rank = module_rank  # None: coefficients are polynomials
        clean = {}
        for t, c in dict(coeffs).items():
            if self.module_rank is None:
                terms = c.terms if hasattr(c, "terms") else dict(c)
                if terms:
                    clean[tuple(t)] = terms
            else:
                if c:
                    clean[tuple(t)] = dict(c)
        self.coeffs = clean

    def content(self):
        """Coefficient list: generators of c(P) (ideal) or c(Q) (submodule)."""
        return [dict(v) for _t, v in sorted(self.coeffs.items())]

    def nonzero_coefficient_count(self):
        return len(self.coeffs)

    def multiply(self, other):
        """Product; exactly one factor may have module coefficients."""
        if self.ring != other.ring:
            raise ContextMismatchError("auxiliary polynomials over different rings")
        if self.module_rank is not None and other.module_rank is not None:
            raise GstabError("cannot multiply two module-valued polynomials")
        p = self.ring.p
        rank = self.module_rank if self.module_rank is not None else other.module_rank
        out = {}
        for t1, c1 in self.coeffs.items():
            for t2, c2 in other.coeffs.items():
                t = tuple(a + b for a, b in zip(t1, t2))
                if self.module_rank is None and other.module_rank is None:
                    prod = K.poly_mul(c1, c2, p)
                    out[t] = K.poly_add(out.get(t, {}), prod, p)
                else:
                    ring_c, vec_c = (c1, c2) if self.module_rank is None else (c2, c1)
                    acc = out.get(t, {})
                    for e, cc in ring_c.items():
                        acc = K.vec_add(acc, K.vec_term_mul(vec_c, cc, e, p), p)
                    out[t] = acc
        out = {t: v for t, v in out.items() if v}
        return AuxPoly(self.ring, out, module_rank=rank)


def aux_poly(ring, coeffs, nvars_aux=1, module_rank=None):
    """Build an AuxPoly from {T-exponent (int or tuple): coefficient}."""
    fixed = {}
    for t, c in coeffs.items():
        if isinstance(t, int):
            t = (t,) + (0,) * (nvars_aux - 1)
        fixed[tuple(t)] = c
    return AuxPoly(ring, fixed, module_rank=module_rank)


def content_module(aux, rank=None):
    """Generators of the content of an auxiliary-variable polynomial.

    Ring coefficients give ideal generators (as rank-1 vectors when rank
    is requested); module coefficients give submodule generators.
    """
    gens = aux.content()
    if aux.module_rank is None and rank is not None:
        return [{(0, e): c for e, c in g.items()} for g in gens]
    return gens


def _ideal_times_module(ring, ideal_gens, mod_gens):
    p = ring.p
    out = []
    for f in ideal_gens:
        for v in mod_gens:
            acc = {}
            for e, c in f.items():
                acc = K.vec_add(acc, K.vec_term_mul(v, c, e, p), p)
            if acc:
                out.append(acc)
    return out


def dm_check(P, Q, budget=None):
    """Dedekind-Mertens: c(P)^{l(Q)-1} c(PQ) == c(P)^{l(Q)} c(Q).

    P has ring coefficients; Q has ring or module coefficients.  Both
    inclusions are decided by Groebner membership over the common ring.
    """
    ring = P.ring
    if P.module_rank is not None:
        raise GstabError("P must have ring coefficients")
    ell = Q.nonzero_coefficient_count()
    if ell == 0:
        return True  # both sides are the zero module
    PQ = P.multiply(Q)
    rank = Q.module_rank if Q.module_rank is not None else 1

    def as_vectors(gens):
        if Q.module_rank is None:
            return [{(0, e): c for e, c in g.items()} for g in gens]
        return gens

    cP = P.content()
    cQ = as_vectors(Q.content())
    cPQ = as_vectors(PQ.content())
    lhs = _ideal_times_module(ring, ideal_power(ring, cP, ell - 1), cPQ)
    rhs = _ideal_times_module(ring, ideal_power(ring, cP, ell), cQ)
    gb_l = buchberger(ring, lhs, rank, budget=budget)
    gb_r = buchberger(ring, rhs, rank, budget=budget)
    return (all(gb_l.contains(v, budget) for v in rhs)
            and all(gb_r.contains(v, budget) for v in lhs))
