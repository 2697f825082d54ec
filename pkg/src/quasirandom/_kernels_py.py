"""Pure Python/numpy kernels; the compiled module mirrors these signatures.

table   int32 (n, n) C-contiguous, table[g, h] = index of g*h
idx     intp 1-d arrays of element indices
masks   uint8 1-d arrays of length n
"""

import numpy as np


def build_table(rmul, parent, pgen):
    n = parent.shape[0]
    cols = np.empty((n, n), dtype=np.int32)
    cols[0] = np.arange(n, dtype=np.int32)
    for y in range(1, n):
        cols[y] = rmul[pgen[y]][cols[parent[y]]]
    return np.ascontiguousarray(cols.T)


def product_mask(table, a_idx, b_idx):
    n = table.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    if len(a_idx) == 0 or len(b_idx) == 0:
        return out
    step = max(1, 2_000_000 // len(b_idx))
    for s in range(0, len(a_idx), step):
        out[table[np.ix_(a_idx[s : s + step], b_idx)].ravel()] = 1
        if s + step < len(a_idx) and out.all():
            break
    return out


def closure(table, gens, limit):
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.uint8)
    mask[0] = 1
    size = 1
    frontier = np.zeros(1, dtype=np.intp)
    while frontier.size and size <= limit:
        cand = table[np.ix_(frontier, gens)].ravel()
        cand = cand[mask[cand] == 0]
        if cand.size == 0:
            break
        cand = np.unique(cand)
        mask[cand] = 1
        size += cand.size
        frontier = cand.astype(np.intp)
    return mask, size


def first_product(table, a_idx, b_idx, c_mask):
    if len(a_idx) == 0 or len(b_idx) == 0:
        return -1, -1
    step = max(1, 1_000_000 // len(b_idx))
    for s in range(0, len(a_idx), step):
        hits = c_mask[table[np.ix_(a_idx[s : s + step], b_idx)]]
        flat = np.flatnonzero(hits)
        if flat.size:
            i, j = divmod(int(flat[0]), len(b_idx))
            return s + i, j
    return -1, -1


def conv_apply(table, binv_idx, v):
    out = np.zeros_like(v)
    for b in binv_idx:
        out += v[table[:, b]]
    return out
