"""Fiber-degree slices M_mu as base-ring modules, and truncations M_{>=mu}.

A slice generator is a pair (parent generator j, x-monomial alpha) with
|alpha| = mu - fiber twist of j; slice relations are the x-monomial shifts
of the parent relations that land in fiber degree mu, with their x-parts
expanded over the slice basis and y-parts kept as base-ring coefficients.
"""

from fractions import Fraction

from . import kernel as K
from .errors import GstabError, TripwireError
from .modules import ModulePresentation, monomials_of_degree, preimage_gens, sub_quotient


def _one(p):
    return 1 if p else Fraction(1)


class SliceModule:
    """One fiber-degree slice of a bigraded module, as a base-ring module."""

    def __init__(self, parent, mu, presentation, basis, rel_source):
        self.parent = parent
        self.mu = mu
        self.presentation = presentation
        self.basis = basis          # list of (parent_gen, x_exps)
        self.basis_index = {b: i for i, b in enumerate(basis)}
        self.rel_source = rel_source

    @property
    def ring(self):
        return self.presentation.ring

    def is_zero(self, budget=None):
        return self.presentation.is_zero(budget)

    def ambient_vector(self, slice_gen_index):
        """The parent free-module vector behind one slice generator."""
        j, alpha = self.basis[slice_gen_index]
        parent_ring = self.parent.ring
        exps = alpha + (0,) * parent_ring.m
        return {(j, exps): _one(parent_ring.p)}

    def coords_of_parent_vector(self, vec):
        """Express a fiber-degree-mu parent vector in slice coordinates.

        Raises when some term has the wrong fiber degree.
        """
        parent_ring = self.parent.ring
        n = parent_ring.n
        out = {}
        for (j, exps), c in vec.items():
            alpha = exps[:n]
            beta = exps[n:]
            idx = self.basis_index.get((j, alpha))
            if idx is None:
                raise GstabError("vector does not lie in fiber degree %d" % self.mu)
            key = (idx, beta)
            out = K.vec_add(out, {key: c}, parent_ring.p)
        return out

    def __repr__(self):
        return "SliceModule(mu=%d, rank %d)" % (self.mu, len(self.basis))


def graded_slice(module, mu, budget=None):
    """M_mu as a presented module over the base context."""
    ring = module.ring
    if module.graded == "none":
        raise GstabError("slice extraction needs a fiber-graded presentation")
    base = ring.base_context()
    basis = []
    for j, tw in enumerate(module.gen_twists):
        d = mu - tw[0]
        for alpha in monomials_of_degree(ring.n, d):
            basis.append((j, alpha))
    index = {b: i for i, b in enumerate(basis)}
    cols = []
    n = ring.n
    for c, ct in zip(module.rel_cols, module.col_twists):
        shift = mu - ct[0]
        for sigma in monomials_of_degree(n, shift):
            col = {}
            for (pos, exps), v in c.items():
                alpha = K.mono_mul(exps[:n], sigma)
                beta = exps[n:]
                col[(index[(pos, alpha)], beta)] = v
            if col:
                cols.append(col)
    if module.graded == "bigraded":
        tw = [(0, module.gen_twists[j][1]) for (j, _alpha) in basis]
        graded = "bigraded"
    else:
        tw = [None] * len(basis)
        graded = "none"
    pres = ModulePresentation(base, tw, cols, graded=graded)
    expected = sum(len(monomials_of_degree(ring.n, mu - t[0])) for t in module.gen_twists)
    if len(basis) != expected:
        raise TripwireError("slice rank bookkeeping failed")
    return SliceModule(module, mu, pres, basis, module)


def slice_nonzero(module, mu, budget=None):
    return not graded_slice(module, mu, budget).is_zero(budget)


def top_fiber_degree(module, upper, budget=None):
    """Largest mu <= upper with M_mu != 0, or None when all such vanish.

    Only sound when the module vanishes in degrees below its generator
    twists, which holds for every cokernel presentation.
    """
    lo = module.min_fiber_twist()
    for mu in range(upper, lo - 1, -1):
        if slice_nonzero(module, mu, budget):
            return mu
    return None


def bottom_fiber_degree(module, budget=None):
    """Smallest mu with M_mu != 0, or None for the zero module."""
    if module.rank == 0 or module.is_zero(budget):
        return None
    lo = module.min_fiber_twist()
    hi = module.max_fiber_twist()
    for mu in range(lo, hi + 1):
        if slice_nonzero(module, mu, budget):
            return mu
    raise TripwireError("nonzero module with no nonzero slice at generator degrees")


def truncate(module, mu, budget=None):
    """Presentation of the truncated submodule M_{>=mu}."""
    ring = module.ring
    if module.graded != "bigraded":
        raise GstabError("truncation needs a bigraded presentation")
    if mu <= module.min_fiber_twist():
        return module
    gens = []
    one = _one(ring.p)
    for j, tw in enumerate(module.gen_twists):
        d = max(0, mu - tw[0])
        for alpha in monomials_of_degree(ring.n, d):
            gens.append({(j, alpha + (0,) * ring.m): one})
    return sub_quotient(ring, gens, module.rel_cols, module.gen_twists,
                        graded="bigraded", budget=budget)
