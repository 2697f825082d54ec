"""Dispatch to the compiled kernels, falling back to numpy.

Set ``QUASIRANDOM_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("QUASIRANDOM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"
IMPLEMENTATIONS = {"python": _kernels_py}
if BACKEND == "cython":
    IMPLEMENTATIONS["cython"] = _impl


def _idx(a):
    return np.ascontiguousarray(a, dtype=np.intp)


def build_table(rmul, parent, pgen, impl=None):
    impl = impl or _impl
    return impl.build_table(
        np.ascontiguousarray(rmul, dtype=np.int32), _idx(parent), _idx(pgen)
    )


def product_mask(table, a_idx, b_idx, impl=None):
    return (impl or _impl).product_mask(table, _idx(a_idx), _idx(b_idx))


def closure(table, gens, limit=None, impl=None):
    """Subgroup generated by ``gens``; stops early once its size exceeds ``limit``."""
    n = table.shape[0]
    mask, size = (impl or _impl).closure(table, _idx(gens), n if limit is None else limit)
    return mask.astype(bool), int(size)


def first_product(table, a_idx, b_idx, c_mask, impl=None):
    c = np.ascontiguousarray(c_mask, dtype=np.uint8)
    i, j = (impl or _impl).first_product(table, _idx(a_idx), _idx(b_idx), c)
    return int(i), int(j)


def conv_apply(table, binv_idx, v, impl=None):
    return (impl or _impl).conv_apply(
        table, _idx(binv_idx), np.ascontiguousarray(v, dtype=np.float64)
    )
