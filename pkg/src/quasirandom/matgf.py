"""Batched linear algebra and polynomial helpers over a GFqField.

Arrays hold field integers; batch axis first.  Prime fields use modular
arithmetic directly, extension fields go through the lookup tables.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .gf import GFqField


def fadd(F: GFqField, a, b):
    if F.is_prime:
        return (np.asarray(a, dtype=np.int64) + b) % F.p
    return F.add[a, b]


def fmul(F: GFqField, a, b):
    if F.is_prime:
        return (np.asarray(a, dtype=np.int64) * b) % F.p
    return F.mul[a, b]


def fsub(F: GFqField, a, b):
    if F.is_prime:
        return (np.asarray(a, dtype=np.int64) - b) % F.p
    return F.sub[a, b]


def matmul(F: GFqField, A, B):
    """Batched product over GF(q); A and B broadcast on the leading axis."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.is_prime:
        return (A @ B) % F.p
    d = A.shape[-1]
    out = F.mul[A[..., :, 0:1], B[..., 0:1, :]].astype(np.int64)
    for l in range(1, d):
        out = F.add[out, F.mul[A[..., :, l : l + 1], B[..., l : l + 1, :]]]
    return out.astype(np.int64)


def _eliminate(F: GFqField, M, ncols_pivot):
    """Gauss-Jordan on each (d, *) matrix of the batch; returns (M, det)."""
    k, d, _ = M.shape
    ar = np.arange(k)
    det = np.ones(k, dtype=np.int64)
    for c in range(ncols_pivot):
        nz = M[:, c:, c] != 0
        has = nz.any(axis=1)
        det = np.where(has, det, 0)
        r = c + np.argmax(nz, axis=1)
        swapped = r != c
        rowc = M[ar, c].copy()
        M[ar, c] = M[ar, r]
        M[ar, r] = rowc
        det = np.where(swapped, fsub(F, 0, det), det)
        piv = np.where(has, M[:, c, c], 1)
        det = fmul(F, det, piv)
        M[:, c, :] = fmul(F, F.inv[piv][:, None], M[:, c, :])
        for r2 in range(d):
            if r2 != c:
                factor = M[:, r2, c]
                M[:, r2, :] = fsub(F, M[:, r2, :], fmul(F, factor[:, None], M[:, c, :]))
    return M, det


def det(F: GFqField, A) -> np.ndarray:
    A = np.array(A, dtype=np.int64, copy=True)
    single = A.ndim == 2
    if single:
        A = A[None]
    _, d = _eliminate(F, A, A.shape[1])
    return d[0] if single else d


def inverse(F: GFqField, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    single = A.ndim == 2
    if single:
        A = A[None]
    k, d, _ = A.shape
    M = np.concatenate([A, np.broadcast_to(np.eye(d, dtype=np.int64), (k, d, d))], axis=2)
    M, dt = _eliminate(F, M, d)
    if np.any(dt == 0):
        raise InputError("singular matrix has no inverse")
    out = M[:, :, d:]
    return out[0] if single else out


def charpoly(F: GFqField, A) -> np.ndarray:
    """Characteristic polynomials det(xI - A), coefficients highest degree first.

    Berkowitz recursion (division free), vectorised over the batch.
    """
    A = np.asarray(A, dtype=np.int64)
    single = A.ndim == 2
    if single:
        A = A[None]
    k, n, _ = A.shape
    ones = np.ones(k, dtype=np.int64)
    p = np.stack([ones, fsub(F, 0, A[:, n - 1, n - 1])], axis=1)
    for r in range(n - 2, -1, -1):
        m = n - r - 1
        R = A[:, r, r + 1 :]
        C = A[:, r + 1 :, r]
        M = A[:, r + 1 :, r + 1 :]
        t = [ones, fsub(F, 0, A[:, r, r])]
        v = C
        for _ in range(m):
            dot = fmul(F, R[:, 0], v[:, 0])
            for j in range(1, m):
                dot = fadd(F, dot, fmul(F, R[:, j], v[:, j]))
            t.append(fsub(F, 0, dot))
            v = matmul(F, M, v[:, :, None])[:, :, 0]
        newp = []
        for i in range(m + 2):
            acc = np.zeros(k, dtype=np.int64)
            for j in range(min(i, m) + 1):
                acc = fadd(F, acc, fmul(F, t[i - j], p[:, j]))
            newp.append(acc)
        p = np.stack(newp, axis=1)
    return p[0] if single else p


# polynomials: tuples of field integers, highest degree first, no leading zeros


def poly_trim(f):
    f = [int(c) for c in f]
    i = 0
    while i < len(f) - 1 and f[i] == 0:
        i += 1
    return f[i:] if f else [0]


def poly_derivative(F: GFqField, f):
    f = poly_trim(f)
    n = len(f) - 1
    out = []
    for i, c in enumerate(f[:-1]):
        e = (n - i) % F.p  # integer multiple as a prime-field element
        out.append(int(F.mul[c, e]))
    return poly_trim(out) if out else [0]


def poly_rem(F: GFqField, f, g):
    f = poly_trim(f)
    g = poly_trim(g)
    if g == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = int(F.inv[g[0]])
    f = list(f)
    while len(f) >= len(g) and f != [0]:
        c = int(F.mul[f[0], lead_inv])
        for j in range(len(g)):
            f[j] = int(F.sub[f[j], F.mul[c, g[j]]])
        f = poly_trim(f[1:]) if len(f) > 1 else [0]
    return f


def poly_gcd(F: GFqField, f, g):
    f, g = poly_trim(f), poly_trim(g)
    while g != [0]:
        f, g = g, poly_rem(F, f, g)
    if f != [0]:
        lead_inv = int(F.inv[f[0]])
        f = [int(F.mul[c, lead_inv]) for c in f]
    return f


def is_squarefree(F: GFqField, f) -> bool:
    """gcd(f, f') == 1.  A vanishing derivative makes the gcd f itself."""
    f = poly_trim(f)
    if len(f) == 1:
        return True
    return len(poly_gcd(F, f, poly_derivative(F, f))) == 1
