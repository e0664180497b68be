"""Kernel selection: compiled extension when available, pure Python otherwise.

Set GSTAB_PURE_PYTHON=1 to force the pure kernel (used by the benchmark and
by the kernel-equivalence tests).
"""

import os

from . import _pykernel

if os.environ.get("GSTAB_PURE_PYTHON"):
    _impl = _pykernel
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernel

KERNEL = _impl.KERNEL
EXP_LIMIT = _impl.EXP_LIMIT
ORDER_DRL = 0
ORDER_LEX = 1
ORDER_BLOCK = 2

mono_mul = _impl.mono_mul
mono_divides = _impl.mono_divides
mono_sub = _impl.mono_sub
mono_lcm = _impl.mono_lcm
mono_deg = _impl.mono_deg
mono_block_deg = _impl.mono_block_deg
mono_key = _impl.mono_key
term_key = _impl.term_key
scalar_inv = _impl.scalar_inv
poly_add = _impl.poly_add
poly_neg = _impl.poly_neg
poly_scale = _impl.poly_scale
poly_term_mul = _impl.poly_term_mul
poly_mul = _impl.poly_mul
vec_add = _impl.vec_add
vec_neg = _impl.vec_neg
vec_scale = _impl.vec_scale
vec_term_mul = _impl.vec_term_mul
vec_lead = _impl.vec_lead
vec_reduce = _impl.vec_reduce
