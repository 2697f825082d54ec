# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops in _kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memset

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.intp_t ip
ctypedef cnp.uint8_t u8


def build_table(const i32[:, ::1] rmul, const ip[::1] parent, const ip[::1] pgen):
    cdef Py_ssize_t n = parent.shape[0]
    cdef Py_ssize_t y, g
    out_arr = np.empty((n, n), dtype=np.int32)
    cdef i32[:, ::1] out = out_arr
    with nogil:
        for g in range(n):
            out[g, 0] = <i32>g
        # column y is rmul[pgen[y]] applied to column parent[y]
        for g in range(n):
            for y in range(1, n):
                out[g, y] = rmul[pgen[y], out[g, parent[y]]]
    return out_arr


def product_mask(const i32[:, ::1] table, const ip[::1] a_idx, const ip[::1] b_idx):
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t na = a_idx.shape[0], nb = b_idx.shape[0]
    cdef Py_ssize_t i, j, count = 0
    cdef i32 z
    cdef const i32[::1] row
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef u8[::1] out = out_arr
    with nogil:
        for i in range(na):
            row = table[a_idx[i]]
            for j in range(nb):
                z = row[b_idx[j]]
                if out[z] == 0:
                    out[z] = 1
                    count += 1
            if count == n:
                break
    return out_arr


def closure(const i32[:, ::1] table, const ip[::1] gens, Py_ssize_t limit):
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t ng = gens.shape[0]
    cdef Py_ssize_t head = 0, size = 1, k
    cdef i32 x, y
    mask_arr = np.zeros(n, dtype=np.uint8)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef u8[::1] mask = mask_arr
    cdef i32[::1] queue = queue_arr
    mask[0] = 1
    queue[0] = 0
    with nogil:
        while head < size and size <= limit:
            x = queue[head]
            head += 1
            for k in range(ng):
                y = table[x, gens[k]]
                if mask[y] == 0:
                    mask[y] = 1
                    queue[size] = y
                    size += 1
    return mask_arr, size


def first_product(const i32[:, ::1] table, const ip[::1] a_idx, const ip[::1] b_idx,
                  const u8[::1] c_mask):
    cdef Py_ssize_t na = a_idx.shape[0], nb = b_idx.shape[0]
    cdef Py_ssize_t i, j
    cdef Py_ssize_t fi = -1, fj = -1
    with nogil:
        for i in range(na):
            for j in range(nb):
                if c_mask[table[a_idx[i], b_idx[j]]]:
                    fi = i
                    fj = j
                    break
            if fi >= 0:
                break
    return fi, fj


def conv_apply(const i32[:, ::1] table, const ip[::1] binv_idx, const double[::1] v):
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t nb = binv_idx.shape[0]
    cdef Py_ssize_t g, k
    cdef double acc
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for g in range(n):
            acc = 0.0
            for k in range(nb):
                acc += v[table[g, binv_idx[k]]]
            out[g] = acc
    return out_arr
