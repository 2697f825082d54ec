"""Subgroups up to conjugacy and the minimal index of a proper subgroup.

Every subgroup is reached from the trivial group by repeatedly adjoining one
element of prime-power order, so a breadth-first search over <H, g>, keeping
one representative per conjugacy class, finds the whole lattice.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from sympy import factorint

from . import kernels
from .errors import CapExceeded, InputError

CERTIFY_LIMIT = 2000
MIN_INDEX_LIMIT = 10**4
ASCENT_TRIES = 500


@dataclass
class Subgroup:
    mask: np.ndarray
    gens: list
    size: int


def _prime_power_cyclic_reps(G):
    """One generator per cyclic subgroup of prime-power order > 1."""
    orders = G.element_orders
    T = G.table
    seen = np.zeros(G.n, dtype=bool)
    seen[0] = True
    reps = []
    for g in range(1, G.n):
        o = int(orders[g])
        if seen[g] or len(factorint(o)) != 1:
            continue
        reps.append(g)
        pw = _powers(T, g, o)
        seen[pw[np.gcd(np.arange(o), o) == 1]] = True
    return reps


def _powers(T, g, o):
    out = np.empty(o, dtype=np.int64)
    x = 0
    for i in range(o):
        out[i] = x
        x = int(T[x, g])
    return out


def _canonical(G, mask):
    """Lexicographically least packed mask among all conjugates."""
    T, inv = G.table, G.inverses
    members = np.flatnonzero(mask)
    ar = np.arange(G.n)
    conj = T[T[inv[:, None], members[None, :]], ar[:, None]]  # x^-1 h x
    masks = np.zeros((G.n, G.n), dtype=bool)
    masks[np.repeat(ar, members.size), conj.ravel()] = True
    packed = np.packbits(masks, axis=1)
    best = min(range(G.n), key=lambda i: packed[i].tobytes())
    return packed[best].tobytes()


def subgroup_classes(G):
    """Representatives of the conjugacy classes of proper subgroups.

    Closures exceeding n/2 are the whole group and are dropped early.
    """
    if G.n > CERTIFY_LIMIT:
        raise CapExceeded(f"subgroup lattice limited to order {CERTIFY_LIMIT}")
    if "subgroup_classes" in G._cache:
        return G._cache["subgroup_classes"]
    half = G.n // 2
    reps = _prime_power_cyclic_reps(G)
    triv = np.zeros(G.n, dtype=bool)
    triv[0] = True
    found = {_canonical(G, triv): Subgroup(triv, [], 1)}
    frontier = [found[next(iter(found))]]
    while frontier:
        new = []
        for H in frontier:
            for g in reps:
                if H.mask[g]:
                    continue
                gens = H.gens + [g]
                mask, size = kernels.closure(G.table, np.array(gens), half)
                if size > half:
                    continue
                key = _canonical(G, mask)
                if key in found:
                    continue
                K = Subgroup(mask, gens, size)
                found[key] = K
                new.append(K)
        frontier = new
    out = sorted(found.values(), key=lambda H: (H.size, H.gens))
    G._cache["subgroup_classes"] = out
    return out


@dataclass
class MinIndexReport:
    index: int
    subgroup_order: int
    generators: list
    certified: bool
    method: str
    classes: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def _heuristic_candidates(G):
    """Pairs and triples drawn from class representatives and their products."""
    from .characters import conjugacy_classes

    cc = conjugacy_classes(G)
    reps = [int(r) for r in cc.reps[1:]]
    T = G.table
    cands = [[r] for r in reps]
    for i, a in enumerate(reps):
        for b in reps[i:]:
            cands.append([a, b])
            cands.append([a, b, int(T[a, b])])
    return cands


def _greedy_gens(G, members):
    gens = []
    mask = np.zeros(G.n, dtype=bool)
    mask[0] = True
    for x in members:
        if not mask[x]:
            gens.append(int(x))
            mask, _ = kernels.closure(G.table, np.array(gens))
    return gens


def _point_stabilizers(G):
    """(generators, order) of each point stabilizer for permutation backends."""
    if G.backend_name != "permutation":
        return []
    els = G.elements
    out = []
    for pt in range(els.shape[1]):
        fix = np.flatnonzero(els[:, pt] == pt)
        out.append((_greedy_gens(G, fix), int(fix.size)))
    return out


def _line_stabilizers(G):
    """Stabilisers of the first coordinate line and hyperplane for matrix backends."""
    if G.backend_name != "matrix" or G.elements.ndim != 3:
        return []
    els = G.elements
    out = []
    # rows act on row vectors v -> v g; zero patterns survive scalar normalisation
    for fix in (np.all(els[:, 0, 1:] == 0, axis=1), np.all(els[:, 1:, 0] == 0, axis=1)):
        members = np.flatnonzero(fix)
        out.append((_greedy_gens(G, members), int(members.size)))
    return out


def _ascend(G, gens, size, half, tries=ASCENT_TRIES):
    """Enlarge <gens> by single elements while the closure stays proper."""
    mask, _ = kernels.closure(G.table, np.array(gens, dtype=np.int64))
    improved = True
    while improved:
        improved = False
        outside = np.flatnonzero(~mask)[:tries]
        for x in outside:
            m2, s2 = kernels.closure(G.table, np.array(gens + [int(x)]), half)
            if size < s2 <= half:
                gens, size, mask = gens + [int(x)], s2, m2
                improved = True
                break
    return gens, size


def min_proper_subgroup_index(G) -> MinIndexReport:
    """Smallest m > 1 such that G has a subgroup of index m."""
    n = G.n
    if n == 1:
        raise InputError("the trivial group has no proper nontrivial-index subgroup")
    if n > MIN_INDEX_LIMIT:
        raise CapExceeded(f"minimal index search limited to order {MIN_INDEX_LIMIT}")
    if n <= CERTIFY_LIMIT:
        classes = subgroup_classes(G)
        best = max(classes, key=lambda H: (H.size, [-x for x in H.gens]))
        return MinIndexReport(n // best.size, best.size, best.gens, True, "lattice", len(classes))
    half = n // 2
    best_size, best_gens = 1, []
    for gens in _heuristic_candidates(G):
        mask, size = kernels.closure(G.table, np.array(gens), half)
        if best_size < size <= half:
            best_size, best_gens = size, gens
    for gens, size in _point_stabilizers(G) + _line_stabilizers(G):
        if best_size < size <= half:
            best_size, best_gens = size, gens
    if best_gens:
        best_gens, best_size = _ascend(G, best_gens, best_size, half)
    return MinIndexReport(n // best_size, best_size, best_gens, False, "heuristic", None)
