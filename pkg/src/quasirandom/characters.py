"""Conjugacy classes and complex character tables by Dixon's modular method.

Class multiplication matrices are split into common eigenvectors over a prime
field F_l with l = 1 mod exponent(G) and l > 2*sqrt(|G|).  Degrees come out as
exact integers; character values are lifted to sums of roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
from sympy import nextprime, primitive_root

from .config import CHAR_TOL
from .errors import InputError, SplittingError


@dataclass
class ConjClasses:
    reps: np.ndarray
    sizes: np.ndarray
    orders: np.ndarray
    class_of: np.ndarray
    members: list = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.reps)


def conjugacy_classes(G) -> ConjClasses:
    """Orbits under conjugation, ordered by (element order, size, least member)."""
    if "classes" in G._cache:
        return G._cache["classes"]
    T, inv = G.table, G.inverses
    n = G.n
    ar = np.arange(n)
    label = np.full(n, -1, dtype=np.intp)
    orbits = []
    for x in range(n):
        if label[x] >= 0:
            continue
        orbit = np.unique(T[T[inv, x], ar])
        label[orbit] = len(orbits)
        orbits.append(orbit)
    orders = G.element_orders
    keys = sorted(range(len(orbits)),
                  key=lambda i: (int(orders[orbits[i][0]]), len(orbits[i]), int(orbits[i][0])))
    members = [orbits[i] for i in keys]
    class_of = np.empty(n, dtype=np.intp)
    for c, orbit in enumerate(members):
        class_of[orbit] = c
    cc = ConjClasses(
        reps=np.array([int(m[0]) for m in members]),
        sizes=np.array([len(m) for m in members], dtype=np.int64),
        orders=np.array([int(orders[m[0]]) for m in members], dtype=np.int64),
        class_of=class_of,
        members=members,
    )
    G._cache["classes"] = cc
    return cc


# arithmetic mod a prime l on int64 arrays ---------------------------------


def _inv_mod(a, ell):
    return pow(int(a) % ell, ell - 2, ell)


def _rref_mod(A, ell):
    """Reduced row echelon form mod ell; returns (R, pivot columns)."""
    A = np.array(A, dtype=np.int64) % ell
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = (A[r] * _inv_mod(A[r, c], ell)) % ell
        f = A[:, c].copy()
        f[r] = 0
        nzr = np.flatnonzero(f)
        if nzr.size:
            A[nzr] = (A[nzr] - f[nzr, None] * A[r]) % ell
        pivots.append(c)
        r += 1
    return A, pivots


def _nullspace_mod(A, ell):
    """Columns spanning the right kernel of A mod ell."""
    R, piv = _rref_mod(A, ell)
    m = A.shape[1]
    free = [c for c in range(m) if c not in piv]
    N = np.zeros((m, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        N[fc, k] = 1
        for i, pc in enumerate(piv):
            N[pc, k] = (-R[i, fc]) % ell
    return N


def _column_echelon(V, ell):
    """Basis of the column space of V with an identity block on pivot rows."""
    R, piv = _rref_mod(V.T, ell)
    B = R[: len(piv)].T.copy()
    return B, piv


def _charpoly_mod(A, ell):
    """Characteristic polynomial (low degree first) via Hessenberg reduction."""
    H = np.array(A, dtype=np.int64) % ell
    m = H.shape[0]
    for j in range(m - 2):
        nz = np.flatnonzero(H[j + 2 :, j])
        if H[j + 1, j] == 0:
            if nz.size == 0:
                continue
            i = j + 2 + nz[0]
            H[[j + 1, i]] = H[[i, j + 1]]
            H[:, [j + 1, i]] = H[:, [i, j + 1]]
        pinv = _inv_mod(H[j + 1, j], ell)
        for k in range(j + 2, m):
            if H[k, j]:
                u = (H[k, j] * pinv) % ell
                H[k] = (H[k] - u * H[j + 1]) % ell
                H[:, j + 1] = (H[:, j + 1] + u * H[:, k]) % ell
    polys = [np.array([1], dtype=np.int64)]
    for k in range(1, m + 1):
        prev = polys[k - 1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[1:] = prev
        cur[:k] = (cur[:k] - H[k - 1, k - 1] * prev) % ell
        prod_sub = 1
        for i in range(k - 1, 0, -1):
            prod_sub = (prod_sub * H[i, i - 1]) % ell
            if prod_sub == 0:
                break
            coef = (H[i - 1, k - 1] * prod_sub) % ell
            if coef:
                cur[:i] = (cur[:i] - coef * polys[i - 1]) % ell
        polys.append(cur)
    return polys[m]


def _roots_mod(poly, ell):
    x = np.arange(ell, dtype=np.int64)
    val = np.zeros(ell, dtype=np.int64)
    for c in poly[::-1]:
        val = (val * x + c) % ell
    return np.flatnonzero(val == 0)


def dixon_prime(order: int, exponent: int) -> int:
    """Least prime l > 2*sqrt(order) with l = 1 mod exponent."""
    p = isqrt(4 * order)
    while True:
        p = nextprime(p)
        if (p - 1) % exponent == 0:
            return int(p)


def class_matrices(G, cc: ConjClasses) -> np.ndarray:
    """M[r, s, t] = #{(x, y) in C_r x C_s : x*y = rep_t}."""
    T, inv = G.table, G.inverses
    s = cc.count
    M = np.zeros((s, s, s), dtype=np.int64)
    for t in range(s):
        z = cc.reps[t]
        for r in range(s):
            ys = T[inv[cc.members[r]], z]
            M[r, :, t] = np.bincount(cc.class_of[ys], minlength=s)
    return M


def _split(M, ell):
    s = M.shape[1]
    spaces = [np.eye(s, dtype=np.int64)]
    for r in range(1, s):
        if all(V.shape[1] == 1 for V in spaces):
            break
        A = M[r] % ell
        new = []
        for V in spaces:
            if V.shape[1] == 1:
                new.append(V)
                continue
            V, piv = _column_echelon(V, ell)
            C = ((A @ V) % ell)[piv]
            total = 0
            for lam in _roots_mod(_charpoly_mod(C, ell), ell):
                D = C.copy()
                D[np.diag_indices_from(D)] = (D[np.diag_indices_from(D)] - lam) % ell
                N = _nullspace_mod(D, ell)
                if N.shape[1]:
                    new.append((V @ N) % ell)
                    total += N.shape[1]
            if total != V.shape[1]:
                raise SplittingError("class matrix not diagonalisable over F_l")
        spaces = new
    if len(spaces) != s or any(V.shape[1] != 1 for V in spaces):
        raise SplittingError(f"eigenspace splitting stopped at {len(spaces)} of {s} pieces")
    return [V[:, 0] for V in spaces]


@dataclass
class CharacterTable:
    values: np.ndarray
    degrees: np.ndarray
    class_sizes: np.ndarray
    classes: ConjClasses = field(repr=False)
    prime: int = 0
    modular: np.ndarray = field(default=None, repr=False)
    residuals: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return int(self.class_sizes.sum())

    def row_residual(self) -> float:
        X = self.values
        gram = (X * self.class_sizes) @ X.conj().T / self.order
        return float(np.abs(gram - np.eye(len(X))).max())

    def column_residual(self) -> float:
        X = self.values
        gram = X.conj().T @ X
        target = np.diag(self.order / self.class_sizes)
        return float(np.abs(gram - target).max())

    def to_tsv(self) -> str:
        def fmt(z):
            re_, im = round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0
            if abs(im) < 1e-10:
                return f"{re_:.10g}"
            return f"{re_:.10g}{im:+.10g}i"

        head = "\t".join(["char"] + [f"c{j}" for j in range(len(self.class_sizes))])
        lines = [head]
        for i, row in enumerate(self.values):
            lines.append("\t".join([f"X{i}"] + [fmt(z) for z in row]))
        return "\n".join(lines) + "\n"


def character_table(G, check=True) -> CharacterTable:
    if "chartab" in G._cache:
        return G._cache["chartab"]
    cc = conjugacy_classes(G)
    s, n = cc.count, G.n
    if s > 300:
        raise InputError(f"{s} conjugacy classes; the character table is limited to 300")
    e = G.exponent
    ell = dixon_prime(n, e)
    rho = int(primitive_root(ell))
    M = class_matrices(G, cc)
    vecs = _split(M, ell)
    inv_class = cc.class_of[G.inverses[cc.reps]]
    size_inv = np.array([_inv_mod(c, ell) for c in cc.sizes], dtype=np.int64)
    rows_mod, degrees = [], []
    for v in vecs:
        v = (v * _inv_mod(v[0], ell)) % ell
        norm = int(((v * v[inv_class]) % ell * size_inv % ell).sum() % ell)
        d2 = (n * _inv_mod(norm, ell)) % ell
        d = next((k for k in range(1, isqrt(n) + 1) if (k * k) % ell == d2), None)
        if d is None:
            raise SplittingError("no integer degree matches the modular norm")
        rows_mod.append((d * v % ell) * size_inv % ell)
        degrees.append(d)
    modular = np.array(rows_mod, dtype=np.int64)
    # power maps on class representatives
    T = G.table
    values = np.zeros((s, s), dtype=complex)
    for t in range(s):
        o = int(cc.orders[t])
        g = cc.reps[t]
        powcls = np.empty(o, dtype=np.intp)
        x = 0
        for k in range(o):
            powcls[k] = cc.class_of[x]
            x = T[x, g]
        z = pow(rho, (ell - 1) // o, ell)
        zinv_pows = np.array([pow(z, (-k) % o, ell) for k in range(o)], dtype=object)
        jk = np.outer(np.arange(o), np.arange(o)) % o
        Z = zinv_pows[jk]
        inv_o = _inv_mod(o, ell)
        chi_pow = modular[:, powcls].astype(object)  # (chars, o)
        mult = (chi_pow @ Z.T) % ell
        mult = np.array((mult * inv_o) % ell, dtype=np.int64)
        roots = np.exp(2j * np.pi * np.arange(o) / o)
        values[:, t] = mult @ roots
    degrees = np.array(degrees, dtype=np.int64)
    trivial = [bool(np.all(modular[i] == 1)) for i in range(s)]
    key = sorted(range(s), key=lambda i: (degrees[i], not trivial[i],
                                          tuple(np.round(values[i].real, 8)),
                                          tuple(np.round(values[i].imag, 8))))
    tab = CharacterTable(values[key], degrees[key], cc.sizes.copy(), cc, ell, modular[key])
    tab.residuals = {"row": tab.row_residual(), "column": tab.column_residual()}
    if check:
        if int((tab.degrees**2).sum()) != n:
            raise SplittingError("sum of squared degrees differs from the group order")
        if max(tab.residuals.values()) > CHAR_TOL:
            raise SplittingError(f"orthogonality residual {max(tab.residuals.values()):.3g}")
    G._cache["chartab"] = tab
    return tab


def min_nontrivial_degree(G) -> int:
    """k: least degree of a nontrivial irreducible representation."""
    if G.n == 1:
        raise InputError("the trivial group has no nontrivial irreducible representation")
    tab = character_table(G)
    return int(tab.degrees[1:].min())
