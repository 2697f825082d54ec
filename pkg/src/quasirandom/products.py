"""Covering by triple products, product-free sets, growth and the quasirandomness profile."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import floor

import numpy as np

from . import kernels
from .characters import conjugacy_classes, min_nontrivial_degree
from .errors import CapExceeded, InputError, QuasirandomError, TheoremViolation
from .parallel import child_rngs, pmap, warm
from .subgroups import CERTIFY_LIMIT, min_proper_subgroup_index, subgroup_classes
from .subsets import SubsetMask, product_set, random_subset

C0 = 10**10
MISSING_SAMPLE = 10


@dataclass
class CoverReport:
    size: int
    threshold: float
    threshold_formula: str
    above_threshold: bool
    covers: bool
    missing: list
    products: int
    vacuous: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _triple_cover(B: SubsetMask):
    B2 = product_set(B, B)
    B3 = product_set(B2, B)
    missing = np.flatnonzero(~B3.mask)
    return B3.is_full(), [int(x) for x in missing[:MISSING_SAMPLE]], B.size**2 + B2.size * B.size


def gowers_threshold(n: int, k: int) -> float:
    return n / k ** (1 / 3)


def gowers_size(n: int, k: int) -> int:
    """Least integer strictly above n / k^(1/3)."""
    t = gowers_threshold(n, k)
    s = floor(t) + 1
    # guard against rounding when n^3/k is a perfect cube
    while (s - 1) ** 3 * k > n**3:
        s -= 1
    while s**3 * k <= n**3:
        s += 1
    return s


def triple_product_covers(B: SubsetMask, k=None, strict=True) -> CoverReport:
    """B^3 = G?  Above n/k^(1/3) a failure raises TheoremViolation."""
    G = B.group
    n = G.n
    if k is None:
        k = min_nontrivial_degree(G) if n > 1 else 1
    threshold = gowers_threshold(n, k)
    above = B.size ** 3 * k > n**3
    covers, missing, products = _triple_cover(B)
    if strict and above and not covers:
        raise TheoremViolation(
            f"|B| = {B.size} > n/k^(1/3) = {threshold:.6g} but B^3 misses {missing}"
        )
    return CoverReport(B.size, threshold, "n/k^(1/3)", above, covers, missing, products,
                       extra={"k": k})


def psl_threshold(L) -> float:
    d, q = L.meta["d"], L.meta["q"]
    return 2 * L.n / q ** ((d - 1) / 3)


def psl_covering_check(L, B: SubsetMask, strict=True) -> CoverReport:
    """B^3 = L for L = PSL(d, q) once |B| >= 2|L|/q^((d-1)/3)."""
    if L.meta.get("family") != "PSL":
        raise InputError(f"{L.name} is not a PSL group")
    threshold = psl_threshold(L)
    above = B.size >= threshold
    covers, missing, products = _triple_cover(B)
    if strict and above and not covers:
        raise TheoremViolation(
            f"|B| = {B.size} >= 2|L|/q^((d-1)/3) = {threshold:.6g} but B^3 misses {missing}"
        )
    return CoverReport(B.size, threshold, "2|L|/q^((d-1)/3)", above, covers, missing, products,
                       vacuous=threshold > L.n,
                       extra={"d": L.meta["d"], "q": L.meta["q"]})


# product-free sets ---------------------------------------------------------


@dataclass
class ProductFreeCert:
    members: list
    status: str
    triple: tuple | None = None
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def product_free(self) -> bool:
        return self.status == "product-free"

    def to_dict(self) -> dict:
        return {"size": self.size, "status": self.status,
                "triple": list(self.triple) if self.triple else None,
                "members": self.members, "meta": self.meta}


def is_product_free(S: SubsetMask) -> ProductFreeCert:
    G = S.group
    idx = S.indices()
    members = [int(x) for x in idx]
    if S.size == 0:
        return ProductFreeCert(members, "product-free")
    i, j = kernels.first_product(G.table, idx, idx, S.mask)
    if i < 0:
        return ProductFreeCert(members, "product-free")
    x, y = int(idx[i]), int(idx[j])
    return ProductFreeCert(members, "violated", (x, y, int(G.table[x, y])))


ALPHA_LIMIT = 200


def _conflict_bits(G):
    """R[y][s]: bitmask of z that cannot join a set containing both y and s."""
    T, inv = G.table, G.inverses
    n = G.n
    ar = np.arange(n)
    R = []
    for y in range(n):
        rows = np.stack([T[y, ar], T[ar, y], T[y, inv], T[inv, y],
                         T[inv[y], ar], T[ar, inv[y]]], axis=1)
        R.append([sum(1 << int(z) for z in set(r.tolist())) for r in rows])
    sq = [0] * n
    for z in range(n):
        sq[int(T[z, z])] |= 1 << z
    return R, sq


def alpha_exact(G, node_budget: int = 2 * 10**7) -> ProductFreeCert:
    """Maximum product-free subset by branch and bound on bitsets."""
    n = G.n
    if n > ALPHA_LIMIT:
        raise CapExceeded(
            f"alpha_exact handles order <= {ALPHA_LIMIT}; use product_free_search for {G.name}"
        )
    R, sq = _conflict_bits(G)
    half = n // 2
    best = []
    nodes = 0

    def search(S, cand, size):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise CapExceeded(f"alpha_exact exceeded {node_budget} search nodes")
        if size > len(best):
            best = list(S)
        if cand == 0 or size + min(cand.bit_count(), half - size) <= len(best):
            return
        y = (cand & -cand).bit_length() - 1
        rem = sq[y] | (1 << y)
        Ry = R[y]
        for s in S:
            rem |= Ry[s]
        rem |= Ry[y]
        S.append(y)
        search(S, cand & ~rem, size + 1)
        S.pop()
        search(S, cand & ~(1 << y), size)

    full = (1 << n) - 1
    search([], full & ~1, 0)
    cert = is_product_free(SubsetMask.from_indices(G, best))
    if not cert.product_free:
        raise QuasirandomError("branch and bound returned a set that is not product-free")
    cert.meta = {"method": "branch-and-bound", "nodes": nodes, "exact": True}
    return cert


def _best_coset(G):
    """Largest proper subgroup H and the coset x*H for the least x outside H."""
    if G.n == 1:
        return None
    if G.n <= CERTIFY_LIMIT:
        classes = subgroup_classes(G)
        H = max(classes, key=lambda S: (S.size, [-x for x in S.gens]))
        mask, gens = H.mask, H.gens
    else:
        rep = min_proper_subgroup_index(G)
        mask, gens = G.closure(rep.generators), rep.generators
    x = int(np.flatnonzero(~mask)[0])
    members = G.table[x, np.flatnonzero(mask)]
    return SubsetMask.from_indices(G, members), gens, x


def _greedy_product_free(G, rng, sample=64):
    """Grow a product-free set, always adding the candidate that removes fewest others."""
    T, inv = G.table, G.inverses
    n = G.n
    sq = T[np.arange(n), np.arange(n)]
    cand = np.ones(n, dtype=bool)
    cand[0] = False
    start = int(rng.integers(1, n)) if n > 1 else None
    S = []

    def removal(y, Sy):
        Sy = np.asarray(Sy)
        parts = [T[y, Sy], T[Sy, y], T[y, inv[Sy]], T[inv[Sy], y],
                 T[inv[y], Sy], T[Sy, inv[y]], np.flatnonzero(sq == y), [y]]
        return np.unique(np.concatenate(parts))

    y = start
    while y is not None:
        S.append(y)
        cand[removal(y, S)] = False
        c = np.flatnonzero(cand)
        if c.size == 0:
            break
        if c.size > sample:
            c = np.sort(rng.choice(c, size=sample, replace=False))
        damage = [int(cand[removal(int(z), S + [int(z)])].sum()) for z in c]
        y = int(c[int(np.argmin(damage))])
    return S


@dataclass
class SearchResult:
    cert: ProductFreeCert
    coset_size: int
    coset_rep: int | None
    coset_subgroup_gens: list
    greedy_best: int
    restarts: int

    @property
    def size(self) -> int:
        return self.cert.size

    def to_dict(self) -> dict:
        d = self.cert.to_dict()
        d.update(coset_size=self.coset_size, coset_rep=self.coset_rep,
                 coset_subgroup_gens=self.coset_subgroup_gens,
                 greedy_best=self.greedy_best, restarts=self.restarts)
        return d


def product_free_search(G, rng=None, restarts: int = 32, workers: int = 1) -> SearchResult:
    """Best of the largest nontrivial coset and greedy growth with random restarts."""
    rng = rng if rng is not None else np.random.default_rng(0)
    warm(G)
    best, source = [], "empty"
    coset_size, coset_rep, coset_gens = 0, None, []
    cos = _best_coset(G)
    if cos is not None:
        mask, coset_gens, coset_rep = cos
        coset_size = mask.size
        best, source = [int(x) for x in mask.indices()], "coset"
    greedy = pmap(lambda r: _greedy_product_free(G, r), child_rngs(rng, restarts), workers)
    greedy_best = max((len(s) for s in greedy), default=0)
    for s in greedy:
        if len(s) > len(best):
            best, source = sorted(s), "greedy"
    cert = is_product_free(SubsetMask.from_indices(G, best))
    if not cert.product_free:
        raise QuasirandomError(f"search produced a set with product {cert.triple}")
    cert.meta = {"method": source, "exact": False}
    return SearchResult(cert, coset_size, coset_rep, coset_gens, greedy_best, restarts)


# growth --------------------------------------------------------------------


@dataclass
class GrowthReport:
    generates: bool
    closure_size: int
    t: int | None
    growth: list
    covers: bool
    periodic: bool

    def to_dict(self) -> dict:
        return asdict(self)


def cover_exponent(G, X: SubsetMask) -> GrowthReport:
    """Least t with X^t = G, using positive products only."""
    if X.size == 0:
        raise InputError("X must be non-empty")
    closure = G.closure(X.indices())
    csize = int(closure.sum())
    if csize != G.n:
        return GrowthReport(False, csize, None, [X.size], False, False)
    layer, growth = X, [X.size]
    seen = {X.mask.tobytes(): 1}
    t = 1
    while not layer.is_full():
        layer = product_set(layer, X)
        t += 1
        growth.append(layer.size)
        key = layer.mask.tobytes()
        if key in seen:
            # the layer sequence has entered a cycle without reaching G
            return GrowthReport(True, csize, None, growth, False, True)
        seen[key] = t
    return GrowthReport(True, csize, t, growth, True, False)


# profile -------------------------------------------------------------------


def is_simple(G) -> bool:
    """Nontrivial and every nontrivial conjugacy class generates G."""
    if G.n == 1:
        return False
    cc = conjugacy_classes(G)
    for members in cc.members[1:]:
        _, size = kernels.closure(G.table, members)
        if size != G.n:
            return False
    return True


def _all_cover(G, size, seed, trials, workers):
    rng = np.random.default_rng([seed, size])
    subsets = [random_subset(G, size, rng) for _ in range(trials)]
    return all(pmap(lambda B: _triple_cover(B)[0], subsets, workers))


def covering_witness(G, rng, trials: int = 100, workers: int = 1) -> int:
    """Smallest size s found by binary search at which all seeded random B of size s have B^3 = G."""
    seed = int(rng.integers(2**63))
    lo, hi = 1, G.n
    while lo < hi:
        mid = (lo + hi) // 2
        if _all_cover(G, mid, seed, trials, workers):
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass
class QuasirandomProfile:
    n: int
    perfect: bool
    warning: str | None
    k: int
    product_free_found: int
    product_free_bound: float
    cover_witness: int
    cover_threshold: int
    min_index: int
    min_index_certified: bool
    min_index_bound_holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def quasirandomness_profile(G, rng=None, trials: int = 100, restarts: int = 32,
                            workers: int = 1) -> QuasirandomProfile:
    rng = rng if rng is not None else np.random.default_rng(0)
    if G.n == 1:
        raise InputError("the trivial group has no quasirandomness profile")
    warm(G)
    perfect = G.is_perfect()
    warning = None if perfect else "group is not perfect; k = 1 from a nontrivial abelian quotient"
    k = min_nontrivial_degree(G)
    found = product_free_search(G, rng, restarts=restarts, workers=workers)
    bound = gowers_threshold(G.n, k)
    if found.size**3 * k > G.n**3:
        raise TheoremViolation(f"product-free set of size {found.size} exceeds n/k^(1/3) = {bound:.6g}")
    witness = covering_witness(G, rng, trials=trials, workers=workers)
    mi = min_proper_subgroup_index(G)
    holds = mi.index <= C0 * k * k
    if not holds:
        raise TheoremViolation(f"minimal index {mi.index} exceeds c0 k^2")
    return QuasirandomProfile(
        n=G.n, perfect=perfect, warning=warning, k=k,
        product_free_found=found.size, product_free_bound=bound,
        cover_witness=witness, cover_threshold=gowers_size(G.n, k),
        min_index=mi.index, min_index_certified=mi.certified, min_index_bound_holds=holds,
    )


@dataclass
class FpfReport:
    degree: int
    fpf_count: int
    proportion: float
    triple_covers: bool
    transitive: bool
    simple: bool

    def to_dict(self) -> dict:
        return asdict(self)


def fpf_triple_check(G) -> FpfReport:
    """Fixed-point-free elements F of a transitive permutation group; is F^3 = G?"""
    if G.backend_name != "permutation":
        raise InputError("fixed-point-free check needs a permutation group")
    els = G.elements
    m = els.shape[1]
    orbit = {0}
    frontier = [0]
    gens = els[G.gens] if G.gens else np.zeros((0, m), dtype=np.int64)
    while frontier:
        nxt = {int(g[p]) for p in frontier for g in gens} - orbit
        orbit |= nxt
        frontier = list(nxt)
    if len(orbit) != m:
        raise InputError(f"{G.name} is not transitive on {m} points")
    fpf = np.all(els != np.arange(m), axis=1)
    F = SubsetMask(G, fpf)
    covers = bool(F.size and product_set(product_set(F, F), F).is_full())
    return FpfReport(m, F.size, F.size / G.n, covers, True, is_simple(G))
