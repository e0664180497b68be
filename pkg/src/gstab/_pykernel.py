"""Pure-Python kernel: monomial, polynomial and reduction primitives.

This module is the reference implementation of the hot kernels.  A compiled
twin (`gstab._speedups`, built from Cython) exports the same names with the
same semantics; `gstab.kernel` picks one at import time.

Data conventions
----------------
* monomial: tuple of non-negative ints, one entry per variable
  (fiber variables first, then base variables).
* coefficient: `fractions.Fraction` when p == 0, else int in [0, p).
* polynomial: dict monomial -> nonzero coefficient.
* vector (element of a free module): dict (position, monomial) -> coeff.
* order codes: 0 = degrevlex on all variables, 1 = lex,
  2 = block order (degrevlex on the fiber block, then degrevlex on the
  base block); `nx` is the size of the fiber block.

Module terms are compared position-over-term: lower position wins first,
then the monomial order.
"""

from fractions import Fraction

from .errors import BudgetExhaustedError, ExponentOverflowError

KERNEL = "python"

# Fixed exponent width; anything bigger is a hard error, never a wraparound.
EXP_LIMIT = 1 << 20

ORDER_DRL = 0
ORDER_LEX = 1
ORDER_BLOCK = 2


# ---------------------------------------------------------------- monomials

def mono_mul(a, b):
    c = tuple(x + y for x, y in zip(a, b))
    for x in c:
        if x >= EXP_LIMIT:
            raise ExponentOverflowError("exponent %d exceeds limit %d" % (x, EXP_LIMIT))
    return c


def mono_divides(a, b):
    """True when a | b componentwise."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_sub(a, b):
    """a / b; the caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def mono_block_deg(a, lo, hi):
    return sum(a[lo:hi])


def _drl_key(e):
    # degrevlex: total degree first, then reversed negated exponents.
    return (sum(e),) + tuple(-x for x in reversed(e))


def mono_key(e, code, nx):
    """Sort key; larger key = more leading monomial."""
    if code == ORDER_DRL:
        return _drl_key(e)
    if code == ORDER_LEX:
        return e
    if code == ORDER_BLOCK:
        return _drl_key(e[:nx]) + _drl_key(e[nx:])
    raise ValueError("unknown order code %r" % (code,))


def term_key(pos, e, code, nx):
    return (-pos,) + mono_key(e, code, nx)


# -------------------------------------------------------------- coefficients

def scalar_inv(c, p):
    if p == 0:
        return Fraction(1) / c
    return pow(c, -1, p)


def _cadd(a, b, p):
    s = a + b
    return s % p if p else s


def _cmul(a, b, p):
    s = a * b
    return s % p if p else s


# --------------------------------------------------------------- polynomials

def poly_add(f, g, p):
    out = dict(f)
    for e, c in g.items():
        s = _cadd(out.get(e, 0), c, p)
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def poly_neg(f, p):
    if p:
        return {e: p - c for e, c in f.items()}
    return {e: -c for e, c in f.items()}


def poly_scale(f, c, p):
    if not c:
        return {}
    out = {}
    for e, a in f.items():
        s = _cmul(a, c, p)
        if s:
            out[e] = s
    return out


def poly_term_mul(f, c, e, p):
    """f * (c * x^e)."""
    if not c:
        return {}
    out = {}
    for e2, a in f.items():
        s = _cmul(a, c, p)
        if s:
            out[mono_mul(e2, e)] = s
    return out


def poly_mul(f, g, p):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = mono_mul(e1, e2)
            s = _cadd(out.get(e, 0), _cmul(c1, c2, p), p)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


# ------------------------------------------------------------------- vectors

def vec_add(u, v, p):
    out = dict(u)
    for t, c in v.items():
        s = _cadd(out.get(t, 0), c, p)
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_neg(u, p):
    if p:
        return {t: p - c for t, c in u.items()}
    return {t: -c for t, c in u.items()}


def vec_scale(u, c, p):
    if not c:
        return {}
    out = {}
    for t, a in u.items():
        s = _cmul(a, c, p)
        if s:
            out[t] = s
    return out


def vec_term_mul(u, c, e, p):
    """u * (c * x^e)."""
    if not c:
        return {}
    out = {}
    for (pos, e2), a in u.items():
        s = _cmul(a, c, p)
        if s:
            out[(pos, mono_mul(e2, e))] = s
    return out


def vec_lead(u, code, nx):
    """Lead term (pos, mono) of u, None when u == 0."""
    best = None
    best_key = None
    for t in u:
        k = term_key(t[0], t[1], code, nx)
        if best_key is None or k > best_key:
            best, best_key = t, k
    return best


def vec_reduce(u, leads, lcs, vecs, p, code, nx, want_cofactors, fuel):
    """Full normal form of u against the reducers.

    `leads[k]` is the lead term of `vecs[k]`, `lcs[k]` its lead coefficient.
    Every term of the result is free of the reducers' lead terms, and

        u = sum_k cofactors[k] * vecs[k] + result.

    The first reducer in list order wins, so reduction is deterministic.
    `fuel` counts elementary term operations; hitting zero raises
    BudgetExhaustedError.  Returns (result, cofactors_or_None, fuel_left).
    """
    work = dict(u)
    out = {}
    cofs = [{} for _ in vecs] if want_cofactors else None
    nred = len(vecs)
    while work:
        t = None
        tk = None
        for s in work:
            k = term_key(s[0], s[1], code, nx)
            if tk is None or k > tk:
                t, tk = s, k
        c = work[t]
        pos, e = t
        hit = -1
        for k in range(nred):
            lt = leads[k]
            if lt[0] == pos and mono_divides(lt[1], e):
                hit = k
                break
        if hit < 0:
            out[t] = c
            del work[t]
            continue
        red = vecs[hit]
        fac = _cmul(c, scalar_inv(lcs[hit], p), p)
        q = mono_sub(e, leads[hit][1])
        for (pos2, e2), c2 in red.items():
            key = (pos2, mono_mul(e2, q))
            prod = _cmul(fac, c2, p)
            s = _cadd(work.get(key, 0), (p - prod) % p if p else -prod, p)
            if s:
                work[key] = s
            else:
                work.pop(key, None)
        fuel -= len(red)
        if fuel < 0:
            raise BudgetExhaustedError("reduction budget exhausted")
        if want_cofactors:
            s = _cadd(cofs[hit].get(q, 0), fac, p)
            if s:
                cofs[hit][q] = s
            else:
                cofs[hit].pop(q, None)
    return out, cofs, fuel
