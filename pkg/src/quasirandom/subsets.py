"""Subsets of an enumerated group stored as boolean masks over element indices."""

from __future__ import annotations

from math import lgamma

import numpy as np

from . import kernels
from .errors import InputError


class SubsetMask:
    """Immutable subset of ``group``; ``mask[i]`` is True when element i belongs."""

    __slots__ = ("group", "mask", "_size")

    def __init__(self, group, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (group.n,):
            raise InputError(f"mask length {mask.shape} does not match group order {group.n}")
        mask = mask.copy()
        mask.setflags(write=False)
        self.group = group
        self.mask = mask
        self._size = int(mask.sum())

    @classmethod
    def from_indices(cls, group, indices):
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= group.n):
            raise InputError(f"subset index out of range 0..{group.n - 1}")
        mask = np.zeros(group.n, dtype=bool)
        mask[idx] = True
        return cls(group, mask)

    @classmethod
    def full(cls, group):
        return cls(group, np.ones(group.n, dtype=bool))

    @classmethod
    def empty(cls, group):
        return cls(group, np.zeros(group.n, dtype=bool))

    @property
    def size(self) -> int:
        return self._size

    def __len__(self):
        return self._size

    def __contains__(self, g):
        return bool(self.mask[int(g)])

    def __eq__(self, other):
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((id(self.group), self.mask.tobytes()))

    def __repr__(self):
        return f"SubsetMask(size={self._size}, n={self.group.n})"

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_full(self) -> bool:
        return self._size == self.group.n

    def inverse(self) -> "SubsetMask":
        out = np.zeros_like(self.mask)
        out[self.group.inverses[self.indices()]] = True
        return SubsetMask(self.group, out)

    def is_symmetric(self) -> bool:
        return bool(np.all(self.mask[self.group.inverses[self.indices()]]))

    def asymmetric_element(self):
        """Some b in the set whose inverse is missing, or None."""
        idx = self.indices()
        bad = idx[~self.mask[self.group.inverses[idx]]]
        return int(bad[0]) if bad.size else None

    def _same(self, other):
        if other.group is not self.group:
            raise InputError("subsets belong to different groups")

    def union(self, other):
        self._same(other)
        return SubsetMask(self.group, self.mask | other.mask)

    def intersection(self, other):
        self._same(other)
        return SubsetMask(self.group, self.mask & other.mask)

    def complement(self):
        return SubsetMask(self.group, ~self.mask)

    def issubset(self, other) -> bool:
        self._same(other)
        return bool(np.all(other.mask[self.mask]))

    def left_translate(self, g: int) -> "SubsetMask":
        """g * S."""
        out = np.zeros_like(self.mask)
        out[self.group.table[int(g), self.indices()]] = True
        return SubsetMask(self.group, out)


def product_set(A: SubsetMask, B: SubsetMask) -> SubsetMask:
    """{a*b : a in A, b in B}."""
    A._same(B)
    G = A.group
    if A.size == 0 or B.size == 0:
        return SubsetMask.empty(G)
    mask = kernels.product_mask(G.table, A.indices(), B.indices())
    return SubsetMask(G, mask.astype(bool))


def power_set(X: SubsetMask, t: int) -> SubsetMask:
    """X^t with positive products only."""
    if t < 1:
        raise InputError("t must be at least 1")
    out = X
    for _ in range(t - 1):
        out = product_set(out, X)
    return out


def random_subset(G, size: int, rng: np.random.Generator) -> SubsetMask:
    if not 0 <= size <= G.n:
        raise InputError(f"subset size {size} outside 0..{G.n}")
    return SubsetMask.from_indices(G, rng.choice(G.n, size=size, replace=False))


def random_symmetric_subset(G, size: int, rng: np.random.Generator) -> SubsetMask:
    """Uniform over symmetric subsets (B = B^-1) of the given size."""
    if not 0 <= size <= G.n:
        raise InputError(f"subset size {size} outside 0..{G.n}")
    inv = G.inverses
    ar = np.arange(G.n)
    selfinv = np.flatnonzero(inv == ar)
    pairs = np.flatnonzero(ar < inv)
    s, p = selfinv.size, pairs.size
    # j self-inverse elements and (size - j) / 2 pairs, weighted by subset counts
    js = [j for j in range(size % 2, min(s, size) + 1, 2) if (size - j) // 2 <= p]
    if not js:
        raise InputError(f"no symmetric subset of size {size} in {G.name}")
    logw = np.array([_log_comb(s, j) + _log_comb(p, (size - j) // 2) for j in js])
    w = np.exp(logw - logw.max())
    n_single = js[int(rng.choice(len(js), p=w / w.sum()))]
    n_pairs = (size - n_single) // 2
    chosen = np.concatenate([
        rng.choice(pairs, size=n_pairs, replace=False),
        rng.choice(selfinv, size=n_single, replace=False),
    ]).astype(np.int64)
    mask = np.zeros(G.n, dtype=bool)
    mask[chosen] = True
    mask[inv[chosen]] = True
    return SubsetMask(G, mask)


def _log_comb(a, b):
    return lgamma(a + 1) - lgamma(b + 1) - lgamma(a - b + 1)


def coset(G, subgroup_gens, rep: int, side: str = "left") -> SubsetMask:
    """rep*H (left) or H*rep (right) for H generated by ``subgroup_gens``."""
    for g in list(subgroup_gens) + [rep]:
        G._check(g)
    H = np.flatnonzero(G.closure(subgroup_gens))
    T = G.table
    members = T[int(rep), H] if side == "left" else T[H, int(rep)]
    return SubsetMask.from_indices(G, members)
