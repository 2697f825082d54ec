"""Finite groups with elements indexed 0..n-1 (0 = identity).

Three backends share one contract: explicit Cayley tables, permutation groups
(with a Schreier-Sims stabilizer chain) and matrix groups over GF(q).  Indices
come from a breadth-first closure over the generators in their given order,
so the same construction always yields the same indexing.
"""

from __future__ import annotations

from math import factorial, gcd, prod
from pathlib import Path

import numpy as np

from . import kernels, matgf
from . import perm as P
from .config import DEFAULT_CAPS, PR_STEPS, Caps
from .errors import CapExceeded, InputError, QuasirandomError
from .gf import GFqField, prime_power


class PermutationBackend:
    kind = "permutation"

    def __init__(self, degree: int, gens):
        self.degree = degree
        self.chain = P.PermGroup(gens, degree)
        self.base = np.array(self.chain.base, dtype=np.intp)
        if degree ** len(self.base) >= 2**62:
            raise CapExceeded("permutation base too long for integer element codes")
        self.weights = degree ** np.arange(len(self.base), dtype=np.int64)
        self.dtype = np.int16 if degree < 2**15 else np.int32
        self.identity = np.arange(degree, dtype=self.dtype)

    def encode(self, batch):
        if len(self.base) == 0:
            return np.zeros(batch.shape[0], dtype=np.int64)
        return batch[:, self.base].astype(np.int64) @ self.weights

    def mul(self, A, B):
        if B.ndim == 1:
            return B[A]
        return np.take_along_axis(B, A.astype(np.intp), axis=1)

    def inverse(self, A):
        return np.argsort(A, axis=-1).astype(self.dtype)


class MatrixBackend:
    """Matrices over GF(q); projective kinds store least-code scalar multiples."""

    kind = "matrix"

    def __init__(self, field: GFqField, d: int, scalars=None):
        self.field, self.d = field, d
        q = field.q
        if q ** (d * d) >= 2**62:
            raise CapExceeded(f"matrices of size {d} over GF({q}) too large for element codes")
        self.weights = q ** np.arange(d * d - 1, -1, -1, dtype=np.int64)
        self.scalars = None if scalars is None else [int(s) for s in scalars]
        self.identity = np.eye(d, dtype=np.int64)

    def encode(self, batch):
        return batch.reshape(batch.shape[0], -1).astype(np.int64) @ self.weights

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[:, None] // self.weights[None, :]) % self.field.q
        return digits.reshape(-1, self.d, self.d)

    def canonical(self, batch):
        if not self.scalars or len(self.scalars) == 1:
            return batch
        cands = np.stack([matgf.fmul(self.field, s, batch) for s in self.scalars])
        codes = np.stack([self.encode(c) for c in cands])
        best = np.argmin(codes, axis=0)
        return cands[best, np.arange(batch.shape[0])]

    def mul(self, A, B):
        A = A if A.ndim == 3 else A[None]
        return self.canonical(matgf.matmul(self.field, A, B))

    def inverse(self, A):
        return self.canonical(matgf.inverse(self.field, A))


class TableBackend:
    kind = "table"

    def __init__(self, table, inv):
        self.table = table
        self.inv = inv
        self.identity = np.array(0, dtype=np.int64)

    def encode(self, batch):
        return np.asarray(batch, dtype=np.int64)

    def mul(self, A, B):
        return self.table[A, B]

    def inverse(self, A):
        return self.inv[A]


def _chunks(n, size):
    for s in range(0, n, size):
        yield slice(s, min(n, s + size))


class FiniteGroup:
    """An enumerated finite group.

    ``multiply``/``inverse`` work on element indices.  The Cayley table is
    built on first use when the order is within ``caps.table``.
    """

    def __init__(self, name, backend, elements, codes, parent, pgen, gen_idx,
                 meta=None, caps: Caps = DEFAULT_CAPS, table=None, inv=None, rmul=None):
        self.name = name
        self.backend = backend
        self.elements = elements
        self.codes = codes
        self.parent = parent
        self.pgen = pgen
        self.gens = [int(g) for g in gen_idx]
        self.meta = dict(meta or {})
        self.caps = caps
        self.n = int(len(codes))
        self._sort = np.argsort(codes, kind="stable")
        self._sorted_codes = codes[self._sort]
        self._table = table
        self._inv = inv
        self._rmul = rmul
        self._orders = None
        self._cache = {}

    enumerable = True

    def __repr__(self):
        return f"<FiniteGroup {self.name} order={self.n} backend={self.backend_name}>"

    def __len__(self):
        return self.n

    @property
    def order(self) -> int:
        return self.n

    @property
    def backend_name(self) -> str:
        return self.backend.kind

    def lookup(self, codes) -> np.ndarray:
        """Indices of elements with the given codes (KeyError if absent)."""
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.minimum(pos, self.n - 1)
        if np.any(self._sorted_codes[pos] != codes):
            raise KeyError("element not in group")
        return self._sort[pos]

    def index_of(self, element) -> int:
        el = np.asarray(element)[None]
        if self.backend.kind == "matrix":
            el = self.backend.canonical(el.astype(np.int64))
        return int(self.lookup(self.backend.encode(el))[0])

    def element(self, g: int):
        self._check(g)
        if self.elements is None:
            return int(g)
        return self.elements[g].copy()

    def _check(self, g):
        if not (0 <= int(g) < self.n):
            raise InputError(f"element index {g} out of range for group of order {self.n}")

    def _batch_mul_idx(self, a_idx, b_idx):
        A = self.elements[a_idx]
        B = self.elements[b_idx]
        return self.lookup(self.backend.encode(self.backend.mul(A, B)))

    @property
    def has_table(self) -> bool:
        return self._table is not None or self.n <= self.caps.table

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.n > self.caps.table:
                raise CapExceeded(
                    f"Cayley table for order {self.n} exceeds table cap {self.caps.table}"
                )
            self._table = kernels.build_table(self.rmul, self.parent, self.pgen)
        return self._table

    @property
    def rmul(self) -> np.ndarray:
        """rmul[s][x] = index of x * gens[s]."""
        if self._rmul is None:
            self._rmul = np.stack(
                [self._right_by(g) for g in self.gens]
            ) if self.gens else np.zeros((0, self.n), dtype=np.int32)
        return self._rmul

    def _right_by(self, g):
        out = np.empty(self.n, dtype=np.int32)
        G = self.elements[g]
        for sl in _chunks(self.n, 65536):
            out[sl] = self.lookup(self.backend.encode(self.backend.mul(self.elements[sl], G)))
        return out

    @property
    def inverses(self) -> np.ndarray:
        if self._inv is None:
            inv = np.empty(self.n, dtype=np.intp)
            for sl in _chunks(self.n, 65536):
                inv[sl] = self.lookup(
                    self.backend.encode(self.backend.inverse(self.elements[sl]))
                )
            self._inv = inv
        return self._inv

    def multiply(self, g: int, h: int) -> int:
        self._check(g)
        self._check(h)
        if self.has_table:
            return int(self.table[g, h])
        return int(self._batch_mul_idx(np.array([g]), np.array([h]))[0])

    def inverse(self, g: int) -> int:
        self._check(g)
        return int(self.inverses[g])

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inverse(g), -e
        r = 0
        while e:
            if e & 1:
                r = self.multiply(r, g)
            g = self.multiply(g, g)
            e >>= 1
        return r

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 x g."""
        return self.multiply(self.multiply(self.inverse(g), x), g)

    def random_element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n))

    def random_elements(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.integers(self.n, size=count)

    def power_map(self, e: int) -> np.ndarray:
        """Index of g**e for every g (vectorised over the table)."""
        T = self.table
        x = np.arange(self.n)
        if e < 0:
            x = self.inverses.copy()
            e = -e
        r = np.zeros(self.n, dtype=np.intp)
        while e:
            if e & 1:
                r = T[r, x]
            x = T[x, x]
            e >>= 1
        return r

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            T = self.table
            x = np.arange(self.n)
            orders = np.zeros(self.n, dtype=np.int64)
            orders[0] = 1
            p = x.copy()
            k = 1
            while not orders.all():
                hit = (p == 0) & (orders == 0)
                orders[hit] = k
                p = T[p, x]
                k += 1
            self._orders = orders
        return self._orders

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.unique(self.element_orders)))

    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            T = self.table
            self._cache["abelian"] = bool(
                all(np.array_equal(T[g], T[:, g]) for g in self.gens)
            )
        return self._cache["abelian"]

    def closure(self, gens, limit=None):
        """Boolean mask of the subgroup generated by ``gens``."""
        gens = np.asarray(list(gens), dtype=np.intp)
        mask, _ = kernels.closure(self.table, gens, limit)
        return mask

    def commutator_subgroup(self) -> np.ndarray:
        if "derived" not in self._cache:
            T, inv = self.table, self.inverses
            # derived subgroup is the normal closure of commutators of generators
            comms = set()
            for a in self.gens:
                for b in self.gens:
                    comms.add(int(T[T[inv[a], inv[b]], T[a, b]]))
            comms.discard(0)
            mask = self.closure(sorted(comms))
            while True:
                idx = np.flatnonzero(mask)
                extra = set()
                for g in self.gens:
                    conj = T[T[inv[g], idx], g]
                    extra.update(int(c) for c in conj[~mask[conj]])
                if not extra:
                    break
                mask = self.closure(sorted(set(np.flatnonzero(mask).tolist()) | extra))
            self._cache["derived"] = mask
        return self._cache["derived"]

    def is_perfect(self) -> bool:
        return bool(self.commutator_subgroup().all())

    def check_axioms(self, rng=None, samples=10_000) -> bool:
        """Exhaustive for n <= 200, random triples otherwise."""
        T, inv = self.table, self.inverses
        ar = np.arange(self.n)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            return False
        if not np.all(T[ar, inv] == 0):
            return False
        if self.n <= 200:
            lhs = T[T[:, :, None], ar[None, None, :]]
            rhs = T[ar[:, None, None], T[None, :, :]]
            return bool(np.array_equal(lhs, rhs))
        rng = rng or np.random.default_rng(0)
        a, b, c = rng.integers(self.n, size=(3, samples))
        return bool(np.array_equal(T[T[a, b], c], T[a, T[b, c]]))


def enumerate_group(name, backend, gens, meta=None, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Breadth-first closure; index order = (frontier position, generator position)."""
    gens = [np.asarray(g) for g in gens]
    ident = backend.identity[None]
    layers = [ident]
    code_layers = [backend.encode(ident)]
    seen = code_layers[0].copy()
    parent = [np.array([-1])]
    pgen = [np.array([-1])]
    frontier, frontier_idx = ident, np.array([0])
    count = 1
    ng = len(gens)
    G = np.stack(gens) if gens else None
    while ng and frontier.shape[0]:
        fsize = frontier.shape[0]
        prods = np.stack([backend.mul(frontier, G[s]) for s in range(ng)], axis=1)
        prods = prods.reshape((fsize * ng,) + frontier.shape[1:])
        pc = backend.encode(prods)
        pos = np.minimum(np.searchsorted(seen, pc), len(seen) - 1)
        cand = np.flatnonzero(seen[pos] != pc)
        if cand.size == 0:
            break
        _, first = np.unique(pc[cand], return_index=True)
        sel = cand[np.sort(first)]
        count += sel.size
        if count > caps.enum:
            raise CapExceeded(f"{name}: more than {caps.enum} elements")
        layers.append(prods[sel])
        code_layers.append(pc[sel])
        parent.append(frontier_idx[sel // ng])
        pgen.append(sel % ng)
        frontier = prods[sel]
        frontier_idx = np.arange(count - sel.size, count)
        seen = np.sort(np.concatenate([seen, pc[sel]]))
    elements = np.concatenate(layers)
    codes = np.concatenate(code_layers)
    grp = FiniteGroup(
        name, backend, elements, codes,
        np.concatenate(parent).astype(np.intp), np.concatenate(pgen).astype(np.intp),
        gen_idx=[], meta=meta, caps=caps,
    )
    grp.gens = [int(i) for i in grp.lookup(backend.encode(G))] if ng else []
    # parent/pgen refer to positions in ``gens``; rmul must follow the same order
    if ng:
        grp._rmul = np.stack([grp._right_by(g) for g in grp.gens])
    return grp


def from_table(table, name="table", meta=None, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Wrap an explicit Cayley table, keeping its indexing (0 must be the identity)."""
    T = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
    n = T.shape[0]
    if T.ndim != 2 or T.shape != (n, n) or n == 0:
        raise InputError("Cayley table must be a non-empty square array")
    ar = np.arange(n)
    if T.min() < 0 or T.max() >= n:
        raise InputError("Cayley table entries out of range")
    if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
        raise InputError("element 0 of a Cayley table must be the identity")
    if any(len(np.unique(T[g])) != n for g in range(n)) or any(
        len(np.unique(T[:, g])) != n for g in range(n)
    ):
        raise InputError("Cayley table is not a Latin square")
    inv = np.argmax(T == 0, axis=1).astype(np.intp)
    if not np.all(T[ar, inv] == 0) or not np.all(T[inv, ar] == 0):
        raise InputError("Cayley table has elements without two-sided inverses")
    if n <= 200:
        if not np.array_equal(T[T[:, :, None], ar[None, None, :]], T[ar[:, None, None], T[None, :, :]]):
            raise InputError("Cayley table is not associative")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(n, size=(3, 10_000))
        if not np.array_equal(T[T[a, b], c], T[a, T[b, c]]):
            raise InputError("Cayley table is not associative")
    # greedy generating set: least index outside the current closure
    gens = []
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    while not mask.all():
        g = int(np.flatnonzero(~mask)[0])
        gens.append(g)
        mask, _ = kernels.closure(T, np.array(gens), None)
    backend = TableBackend(T, inv)
    grp = FiniteGroup(name, backend, None, np.arange(n, dtype=np.int64),
                      None, None, gens, meta=meta, caps=caps, table=T, inv=inv)
    grp._rmul = np.stack([T[:, g] for g in gens]).astype(np.int32) if gens else None
    return grp


def load_table(path, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Read a Cayley table file: first line n, then n rows of n indices."""
    path = Path(path)
    try:
        tokens = path.read_text().split()
    except OSError as exc:
        raise InputError(f"cannot read table file {path}: {exc}") from None
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"{path}: non-integer entry") from None
    if not vals:
        raise InputError(f"{path}: empty table file")
    n = vals[0]
    if n < 1 or len(vals) != 1 + n * n:
        raise InputError(f"{path}: expected {n * n} entries after the order line")
    return from_table(np.array(vals[1:]).reshape(n, n), name=f"table:{path.name}",
                      meta={"family": "table", "path": str(path)}, caps=caps)


def direct_product(G: FiniteGroup, H: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Table group on pairs (g, h) -> g * |H| + h."""
    m = H.n
    T = (G.table.astype(np.int64)[:, None, :, None] * m + H.table[None, :, None, :])
    T = T.reshape(G.n * m, G.n * m)
    return from_table(T, name=f"{G.name}x{H.name}",
                      meta={"family": "product", "factors": [G.name, H.name]}, caps=caps)


# named families -------------------------------------------------------------


def _perm_group(name, degree, gens, meta, caps, expected=None):
    if expected is not None and expected > caps.enum:
        raise CapExceeded(f"{name} has order {expected} above enumeration cap {caps.enum}")
    backend = PermutationBackend(degree, gens)
    grp = enumerate_group(name, backend, [np.array(g, dtype=backend.dtype) for g in gens],
                          meta=meta, caps=caps)
    if grp.n != backend.chain.order or (expected is not None and grp.n != expected):
        raise QuasirandomError(f"{name}: enumeration gave {grp.n}, chain gave {backend.chain.order}")
    grp.perm_group = backend.chain
    return grp


def cyclic(m: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    if m < 1:
        raise InputError("cyclic order must be positive")
    gens = [P.cycle(m, *range(m))] if m > 1 else []
    return _perm_group(f"C({m})", m, gens, {"family": "C", "m": m}, caps, expected=m)


def dihedral(m: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Dihedral group of order 2m; natural action for m >= 3, regular otherwise."""
    if m < 1:
        raise InputError("dihedral parameter must be positive")
    meta = {"family": "D", "m": m}
    if m >= 3:
        rot = P.cycle(m, *range(m))
        refl = tuple((-i) % m for i in range(m))
        return _perm_group(f"D({m})", m, [rot, refl], meta, caps, expected=2 * m)

    # elements r^i s^j <-> i + m*j; right regular action x -> x*g
    def mult(a, b):
        i1, j1 = a % m, a // m
        i2, j2 = b % m, b // m
        return ((i1 + (i2 if j1 == 0 else -i2)) % m) + m * ((j1 + j2) % 2)

    gens = [tuple(mult(x, g) for x in range(2 * m)) for g in (1 % m, m)]
    gens = [g for g in gens if not P.is_identity(g)]
    return _perm_group(f"D({m})", 2 * m, gens, meta, caps, expected=2 * m)


def symmetric(m: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    if m < 1:
        raise InputError("symmetric degree must be positive")
    gens = [P.cycle(m, i, i + 1) for i in range(m - 1)]
    return _perm_group(f"Sym({m})", m, gens, {"family": "Sym", "m": m}, caps,
                       expected=factorial(m))


def alternating(m: int, caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    if m < 1:
        raise InputError("alternating degree must be positive")
    gens = [P.cycle(m, i, i + 1, i + 2) for i in range(m - 2)]
    return _perm_group(f"Alt({m})", m, gens, {"family": "Alt", "m": m}, caps,
                       expected=max(1, factorial(m) // 2))


def quaternion(caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Q8 inside SL(2,3)."""
    F = GFqField(3)
    gens = [np.array([[0, 1], [2, 0]]), np.array([[1, 1], [1, 2]])]
    return enumerate_group("Q8", MatrixBackend(F, 2), gens, meta={"family": "Q8"}, caps=caps)


def gl_order(d, q):
    return q ** (d * (d - 1) // 2) * prod(q**i - 1 for i in range(1, d + 1))


def sl_order(d, q):
    return gl_order(d, q) // (q - 1)


def su_order(d, q):
    return q ** (d * (d - 1) // 2) * prod(q**i - (-1) ** i for i in range(2, d + 1))


def family_order(kind: str, d: int, q: int) -> int:
    return {
        "GL": lambda: gl_order(d, q),
        "SL": lambda: sl_order(d, q),
        "PSL": lambda: sl_order(d, q) // gcd(d, q - 1),
        "SU": lambda: su_order(d, q),
        "PSU": lambda: su_order(d, q) // gcd(d, q + 1),
    }[kind]()


def _elementary(d, i, j, t):
    m = np.eye(d, dtype=np.int64)
    m[i, j] = t
    return m


def _sl_generators(F: GFqField, d: int, with_det=False):
    gens = [_elementary(d, i, j, t) for i in range(d) for j in range(d) if i != j
            for t in F.prime_basis()]
    if with_det:
        m = np.eye(d, dtype=np.int64)
        m[0, 0] = F.primitive
        gens.append(m)
    return gens


def _su2_block(F2: GFqField, q: int, caps: Caps):
    conj = np.array([F2.power(x, q) for x in range(F2.q)])
    norm = F2.mul[np.arange(F2.q), conj]
    block = []
    for a in range(F2.q):
        for b in range(F2.q):
            if F2.add[norm[a], norm[b]] == 1:
                block.append(np.array([[a, b], [F2.neg[conj[b]], conj[a]]], dtype=np.int64))
    target = su_order(2, q)
    if len(block) != target:
        raise QuasirandomError("unitary 2x2 block enumeration failed")
    backend = MatrixBackend(F2, 2)
    chosen = []
    size = 1
    for m in block:
        if size == target:
            break
        trial = enumerate_group("SU2", backend, chosen + [m], caps=caps)
        if trial.n > size:
            chosen.append(m)
            size = trial.n
    return chosen


def _unitary_transvections(F2: GFqField, q: int, d: int, limit: int):
    """x -> x + a<x,v>v for isotropic v and a nonzero with a^q = -a."""
    conj = np.array([F2.power(x, q) for x in range(F2.q)])
    a = next(x for x in range(1, F2.q) if conj[x] == F2.neg[x])
    out = []
    for code in range(F2.q ** (d - 1)):
        v = [1] + [(code // F2.q**i) % F2.q for i in range(d - 1)]
        vbar = conj[v]
        acc = 0
        for x, y in zip(v, vbar):
            acc = F2.add[acc, F2.mul[x, y]]
        if acc != 0:
            continue
        outer = F2.mul[F2.mul[a, vbar][:, None], np.array(v)[None, :]]
        out.append(F2.add[np.eye(d, dtype=np.int64), outer].astype(np.int64))
        if len(out) >= limit:
            break
    return out


def _su_generators(F2: GFqField, q: int, d: int, caps: Caps):
    blocks = _su2_block(F2, q, caps)
    gens = []
    for i in range(d):
        for j in range(i + 1, d):
            for b in blocks:
                m = np.eye(d, dtype=np.int64)
                m[np.ix_([i, j], [i, j])] = b
                gens.append(m)
    pool = []
    if d >= 3:
        pool = (_unitary_transvections(F2, q, d, limit=4 * d)
                + _unitary_reflection_pairs(F2, q, d, limit=64))
    return gens, pool


def _unitary_reflection_pairs(F2: GFqField, q: int, d: int, limit: int):
    """Products r(v, lam) r(e1, 1/lam) of quasi-reflections; determinant 1.

    r(v, lam): x -> x + (lam - 1)/<v,v> <x,v> v, for non-isotropic v and
    lam of norm 1.  Needed because transvections for the identity form can
    all be monomial (e.g. SU(3,2)).
    """
    conj = np.array([F2.power(x, q) for x in range(F2.q)])
    lam = next(x for x in range(2, F2.q) if F2.mul[x, conj[x]] == 1) if q > 1 else 1
    if F2.mul[lam, conj[lam]] != 1:
        return []

    def refl(v, mu):
        v = np.array(v)
        vbar = conj[v]
        vv = 0
        for x, y in zip(v, vbar):
            vv = F2.add[vv, F2.mul[x, y]]
        c = F2.mul[F2.sub[mu, 1], F2.inv[vv]]
        outer = F2.mul[F2.mul[c, vbar][:, None], v[None, :]]
        return F2.add[np.eye(d, dtype=np.int64), outer].astype(np.int64)

    e1 = refl([1] + [0] * (d - 1), F2.inv[lam])
    out = []
    for code in range(1, F2.q ** (d - 1)):
        v = [1] + [(code // F2.q**i) % F2.q for i in range(d - 1)]
        vv = 0
        for x in v:
            vv = F2.add[vv, F2.mul[x, conj[x]]]
        if vv == 0 or sum(1 for x in v if x) < 2:
            continue
        out.append(matgf.matmul(F2, refl(v, lam), e1))
        if len(out) >= limit:
            break
    return out


class ImplicitGroup:
    """Matrix group above the enumeration cap.

    Elements are integer codes.  Only multiply, inverse and (approximately
    uniform) random elements are available.
    """

    enumerable = False

    def __init__(self, name, backend: MatrixBackend, gens, order: int, meta=None):
        self.name = name
        self.backend = backend
        self.gen_elements = [np.asarray(g, dtype=np.int64) for g in gens]
        self.n = order
        self.meta = dict(meta or {})

    def __repr__(self):
        return f"<ImplicitGroup {self.name} order={self.n}>"

    @property
    def order(self):
        return self.n

    @property
    def backend_name(self):
        return self.backend.kind

    @property
    def identity(self) -> int:
        return int(self.backend.encode(self.backend.identity[None])[0])

    def element(self, code: int):
        return self.backend.decode([code])[0]

    def multiply(self, a: int, b: int) -> int:
        A, B = self.backend.decode([a, b])
        return int(self.backend.encode(self.backend.mul(A[None], B[None]))[0])

    def inverse(self, a: int) -> int:
        A = self.backend.decode([a])
        return int(self.backend.encode(self.backend.inverse(A))[0])

    def random_element(self, rng: np.random.Generator, steps: int = PR_STEPS) -> int:
        return int(self.random_elements(rng, 1, steps)[0])

    def random_elements(self, rng, count: int, steps: int = PR_STEPS) -> np.ndarray:
        """Independent product-replacement walks, one per requested element."""
        out = np.empty(count, dtype=np.int64)
        for sl in _chunks(count, 8192):
            out[sl] = self.backend.encode(
                product_replacement(self.backend, self.gen_elements, rng, sl.stop - sl.start, steps)
            )
        return out


def product_replacement(backend, gens, rng, count, steps, slots=10):
    """Rattle variant: slot_i <- slot_i * slot_j^(+-1), accumulator <- accumulator * slot_i."""
    G = np.stack(gens)
    k = max(slots, len(gens), 2)
    init = G[np.arange(k) % len(gens)]
    S = np.broadcast_to(init, (count,) + init.shape).copy()
    acc = np.broadcast_to(backend.identity, (count,) + backend.identity.shape).copy()
    ar = np.arange(count)
    tail = (1,) * backend.identity.ndim
    for _ in range(steps):
        i = rng.integers(k, size=count)
        j = (i + rng.integers(1, k, size=count)) % k
        flip = rng.integers(2, size=count).astype(bool).reshape((count,) + tail)
        Sj = S[ar, j]
        Sj = np.where(flip, backend.inverse(Sj), Sj)
        new = backend.mul(S[ar, i], Sj)
        S[ar, i] = new
        acc = backend.mul(acc, new)
    return acc


def matrix_family(kind: str, d: int, q: int, caps: Caps = DEFAULT_CAPS):
    """GL, SL, PSL, SU or PSU; ImplicitGroup above the enumeration cap."""
    kind = kind.upper()
    if kind not in ("GL", "SL", "PSL", "SU", "PSU"):
        raise InputError(f"unsupported matrix family {kind}")
    prime_power(q)
    if d < 1 or (kind != "GL" and d < 2):
        raise InputError(f"{kind}({d},{q}): dimension too small")
    order = family_order(kind, d, q)
    name = f"{kind}({d},{q})"
    meta = {"family": kind, "d": d, "q": q, "rank": d - 1}
    if kind in ("SU", "PSU"):
        F = GFqField(q * q)
        gens, pool = _su_generators(F, q, d, caps)
        scalars = None
        if kind == "PSU":
            scalars = [a for a in range(1, F.q)
                       if F.power(a, q + 1) == 1 and F.power(a, d) == 1]
    else:
        F = GFqField(q)
        gens = _sl_generators(F, d, with_det=(kind == "GL"))
        scalars = None
        if kind == "PSL":
            scalars = [a for a in range(1, q) if F.power(a, d) == 1]
    backend = MatrixBackend(F, d, scalars)
    gens = [backend.canonical(g[None])[0] for g in gens]
    meta["field"] = F.q
    if order > caps.enum:
        if kind in ("SU", "PSU"):
            # unverified: no enumeration to check the closure against the order
            gens = gens + [backend.canonical(g[None])[0] for g in pool[: 2 * d]]
        return ImplicitGroup(name, backend, gens, order, meta)
    grp = enumerate_group(name, backend, gens, meta=meta, caps=caps)
    if kind in ("SU", "PSU"):
        # identity-form unitary groups need extra generators in small characteristic
        for cand in pool:
            if grp.n == order:
                break
            cand = backend.canonical(cand[None])
            try:
                grp.lookup(backend.encode(cand))
            except KeyError:
                gens.append(cand[0])
                grp = enumerate_group(name, backend, gens, meta=meta, caps=caps)
    if grp.n != order:
        raise QuasirandomError(f"{name}: closure has {grp.n} elements, expected {order}")
    return grp


def matrix_group(q: int, gens, name="matrix", caps: Caps = DEFAULT_CAPS) -> FiniteGroup:
    """Subgroup of GL(d, q) generated by explicit matrices."""
    F = GFqField(q)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if not gens:
        raise InputError("need at least one generator matrix")
    d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d) or g.min() < 0 or g.max() >= q:
            raise InputError("generator matrices must be square with entries in 0..q-1")
        if matgf.det(F, g) == 0:
            raise InputError("singular generator matrix")
    return enumerate_group(name, MatrixBackend(F, d), gens,
                           meta={"family": "matrix", "d": d, "q": q}, caps=caps)


def construct_family(family: str, *params, caps: Caps = DEFAULT_CAPS):
    """Build a group from a family name and integer parameters."""
    fam = family.strip()
    key = fam.lower()
    simple = {
        "c": cyclic, "cyclic": cyclic,
        "d": dihedral, "dihedral": dihedral,
        "sym": symmetric, "symmetric": symmetric, "s": symmetric,
        "alt": alternating, "alternating": alternating, "a": alternating,
    }
    if key in simple:
        if len(params) != 1:
            raise InputError(f"{family} takes one parameter")
        return simple[key](int(params[0]), caps=caps)
    if key in ("gl", "sl", "psl", "su", "psu"):
        if len(params) != 2:
            raise InputError(f"{family} takes parameters (d, q)")
        return matrix_family(key.upper(), int(params[0]), int(params[1]), caps=caps)
    if key == "table":
        return load_table(params[0], caps=caps)
    if key in ("q8", "quaternion"):
        return quaternion(caps=caps)
    raise InputError(f"unsupported family {family!r}")
