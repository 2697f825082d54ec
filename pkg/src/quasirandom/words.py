"""Words in a free group, their value sets, Waring-type covering and semisimplicity."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil, sqrt

import numpy as np

from . import kernels, matgf
from .characters import conjugacy_classes
from .errors import CapExceeded, InputError
from .parallel import child_rngs, pmap, warm
from .subsets import SubsetMask, product_set


class WordSyntaxError(InputError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class Word:
    """Freely reduced word; ``letters`` holds (letter index >= 1, nonzero exponent)."""

    arity: int
    letters: tuple

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(self.arity, tuple((i, -e) for i, e in reversed(self.letters)))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.letters)


def reduce_letters(pairs):
    out = []
    for i, e in pairs:
        if e == 0:
            continue
        if out and out[-1][0] == i:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((i, e))
    return tuple(out)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.styles = set()
        self.alpha = set()

    def error(self, msg, pos=None):
        raise WordSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self, stop):
        items = []
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                c = self.peek()
            if c == "" or c in stop:
                break
            items.extend(self.term())
        if not items and not self.text.strip():
            self.error("empty word")
        return items

    def term(self):
        start = self.pos
        c = self.peek()
        if c == "[":
            self.pos += 1
            u = self.word(",")
            if self.peek() != ",":
                self.error("expected ','")
            self.pos += 1
            v = self.word("]")
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            if not u or not v:
                self.error("empty commutator entry", start)
            body = _inv(u) + _inv(v) + u + v
        elif c == "1":
            self.pos += 1
            body = []
        elif c == "(":
            self.pos += 1
            body = self.word(")")
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c.isalpha() and c.islower():
            self.pos += 1
            nxt = self.text[self.pos] if self.pos < len(self.text) else ""
            if c == "x" and nxt.isdigit():
                if nxt == "0":
                    self.error("letter index must be 1..9")
                self.pos += 1
                if self.pos < len(self.text) and self.text[self.pos].isdigit():
                    self.error("letter index must be 1..9")
                self.styles.add("x")
                body = [(("x", int(nxt)), 1)]
            else:
                self.styles.add("alpha")
                self.alpha.add(c)
                body = [(("a", c), 1)]
        else:
            self.error(f"unexpected {c!r}" if c else "unexpected end of input")
        if self.peek() == "^":
            self.pos += 1
            self.peek()
            m = self.pos
            if m < len(self.text) and self.text[m] in "+-":
                m += 1
            e = m
            while e < len(self.text) and self.text[e].isdigit():
                e += 1
            if e == m:
                self.error("expected integer exponent")
            k = int(self.text[self.pos:e])
            self.pos = e
            body = _power(body, k)
        return body


def _inv(items):
    return [(a, -e) for a, e in reversed(items)]


def _power(items, k):
    if len(items) == 1:
        return [(items[0][0], items[0][1] * k)]
    base = items if k >= 0 else _inv(items)
    return base * abs(k)


def parse_word(text: str, allow_trivial: bool = False) -> Word:
    """Parse ``x1^2 x2``, ``[a,b]``, ``a^-1 b a`` and similar.

    Letters are x1..x9 (index given) or a..z (numbered alphabetically); the
    two styles cannot be mixed in one word.
    """
    p = _Parser(text)
    items = p.word("")
    if p.peek() != "":
        p.error(f"unexpected {p.peek()!r}")
    if len(p.styles) > 1:
        raise InputError(f"word {text!r} mixes x1..x9 letters with a..z letters")
    order = {c: i + 1 for i, c in enumerate(sorted(p.alpha))}
    pairs = [((k[1] if k[0] == "x" else order[k[1]]), e) for k, e in items]
    letters = reduce_letters(pairs)
    arity = max((i for i, _ in pairs), default=0)
    w = Word(arity, letters)
    if w.is_trivial and not allow_trivial:
        raise InputError(f"word {text!r} reduces to the trivial word")
    return w


def as_word(w) -> Word:
    return w if isinstance(w, Word) else parse_word(w)


# evaluation ------------------------------------------------------------------


def _power_map(G, e):
    key = ("pow", e)
    if key not in G._cache:
        G._cache[key] = G.power_map(e)
    return G._cache[key]


def evaluate_batch(G, w: Word, columns) -> np.ndarray:
    """Values of w on tuples given column-wise (columns[i] holds letter i+1)."""
    if len(columns) < w.arity:
        raise InputError(f"word has arity {w.arity} but only {len(columns)} values given")
    size = len(columns[0]) if columns else 1
    out = np.zeros(size, dtype=np.intp)
    T = G.table
    for i, e in w.letters:
        out = T[out, _power_map(G, e)[columns[i - 1]]]
    return out


def evaluate_word(G, w, values) -> int:
    w = as_word(w)
    for v in values:
        G._check(v)
    cols = [np.array([int(v)]) for v in values]
    return int(evaluate_batch(G, w, cols)[0])


@dataclass
class WordValueSet:
    group: object = field(repr=False)
    words: list
    mode: str
    mask: SubsetMask | None
    density: float
    radius: float
    trials: int
    classes_found: int | None = None

    @property
    def size(self) -> int | None:
        return self.mask.size if self.mode == "exact" else None

    def to_dict(self) -> dict:
        return {"words": [str(w) for w in self.words], "mode": self.mode, "size": self.size,
                "order": self.group.n, "density": self.density, "radius": self.radius,
                "trials": self.trials, "classes_found": self.classes_found}


def _class_closure(G, values):
    cc = conjugacy_classes(G)
    hit = np.zeros(cc.count, dtype=bool)
    hit[cc.class_of[values]] = True
    return hit[cc.class_of]


def _exact_values(G, w: Word, chunk=1 << 20):
    n = G.n
    if w.arity <= 1:
        # w(g^x) = w(g)^x, so class representatives suffice
        reps = conjugacy_classes(G).reps
        return _class_closure(G, evaluate_batch(G, w, [reps]))
    total = n**w.arity
    if total > G.caps.work:
        raise CapExceeded(f"{total} tuples exceed the work cap {G.caps.work}")
    mask = np.zeros(n, dtype=bool)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = []
        for _ in range(w.arity):
            idx, r = np.divmod(idx, n)
            cols.append(r)
        mask[evaluate_batch(G, w, cols)] = True
    return mask


def word_value_set(G, words, mode: str = "auto", samples: int = 10**6, rng=None) -> WordValueSet:
    """Exact w1(G) n ... n wk(G), or a sampled density estimate."""
    words = [as_word(w) for w in words]
    if not words:
        raise InputError("need at least one word")
    warm(G)
    exact_ok = all(w.arity <= 1 or G.n**w.arity <= G.caps.work for w in words)
    if mode == "auto":
        mode = "exact" if exact_ok else "sampled"
    if mode == "exact":
        mask = np.ones(G.n, dtype=bool)
        for w in words:
            mask &= _exact_values(G, w)
        S = SubsetMask(G, mask)
        return WordValueSet(G, words, "exact", S, S.size / G.n, 0.0, 0)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    rng = rng if rng is not None else np.random.default_rng(0)
    # value sets are unions of classes; discover the classes by random substitution
    mask = np.ones(G.n, dtype=bool)
    for w in words:
        found = np.zeros(G.n, dtype=bool)
        for start in range(0, samples, 1 << 18):
            m = min(samples - start, 1 << 18)
            cols = [rng.integers(G.n, size=m) for _ in range(max(w.arity, 1))]
            found[evaluate_batch(G, w, cols)] = True
        mask &= _class_closure(G, np.flatnonzero(found))
    draws = rng.integers(G.n, size=samples)
    p = float(mask[draws].mean())
    radius = 3 * sqrt(max(p * (1 - p), 1 / samples) / samples)
    cc = conjugacy_classes(G)
    classes = int(np.unique(cc.class_of[np.flatnonzero(mask)]).size)
    return WordValueSet(G, words, "sampled", SubsetMask(G, mask), p, radius, samples, classes)


# Waring-type covering ---------------------------------------------------------


@dataclass
class WaringReport:
    value_set_size: int
    full_covers: bool
    full_missing: list
    sparse: dict | None = None
    distinct: dict | None = None
    empirical: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def sparse_size(L, W_size: int) -> int:
    q, r = L.meta.get("q"), L.meta.get("rank")
    if q is None or r is None:
        raise InputError(f"{L.name} has no attached Lie-type parameters (q, r)")
    return ceil(W_size / q ** (r / 13))


def _distinct_factors(G, W: SubsetMask):
    """For each g, is g = h1 h2 h3 with pairwise distinct h_i in W?"""
    T, inv = G.table, G.inverses
    w = W.indices()
    if w.size**2 * G.n > G.caps.work:
        raise CapExceeded("distinct-factor scan exceeds the work cap")
    P = T[w[:, None], w[None, :]]
    Pinv = inv[P]
    off = w[:, None] != w[None, :]
    h1 = np.broadcast_to(w[:, None], P.shape)
    h2 = np.broadcast_to(w[None, :], P.shape)
    ok = np.zeros(G.n, dtype=bool)
    for g in range(G.n):
        h3 = T[Pinv, g]
        ok[g] = bool(np.any(off & W.mask[h3] & (h3 != h1) & (h3 != h2)))
    missing = np.flatnonzero(~ok)
    return {"all_covered": bool(ok.all()), "missing": [int(x) for x in missing[:10]]}


def waring_check(L, words, sparse_trials: int = 0, distinct: bool = False, rng=None,
                 workers: int = 1) -> WaringReport:
    """W^3 = L for W the exact value set; optional sparse subsets and distinct factors."""
    vs = word_value_set(L, words, mode="exact")
    W = vs.mask
    W3 = product_set(product_set(W, W), W)
    missing = np.flatnonzero(~W3.mask)
    rep = WaringReport(W.size, W3.is_full(), [int(x) for x in missing[:10]])
    if sparse_trials:
        rng = rng if rng is not None else np.random.default_rng(0)
        size = sparse_size(L, W.size)
        members = W.indices()
        picks = [SubsetMask.from_indices(L, r.choice(members, size=size, replace=False))
                 for r in child_rngs(rng, sparse_trials)]
        covered = pmap(lambda S: product_set(product_set(S, S), S).is_full(), picks, workers)
        rep.sparse = {"size": size, "threshold_formula": "ceil(|W|/q^(r/13))",
                      "q": L.meta["q"], "r": L.meta["rank"], "trials": sparse_trials,
                      "covered": int(sum(covered)), "frequency": sum(covered) / sparse_trials}
    if distinct:
        rep.distinct = _distinct_factors(L, W)
    return rep


# regular semisimple elements ---------------------------------------------------


def _require_matrix(G):
    if G.backend_name != "matrix":
        raise InputError(f"{G.name} is not a matrix group")


def _rs_flags(F, mats, cache):
    polys = matgf.charpoly(F, mats)
    uniq, inv = np.unique(polys, axis=0, return_inverse=True)
    flags = np.empty(len(uniq), dtype=bool)
    for i, f in enumerate(uniq):
        key = tuple(int(c) for c in f)
        if key not in cache:
            cache[key] = matgf.is_squarefree(F, list(key))
        flags[i] = cache[key]
    return flags[inv.ravel()]


def is_regular_semisimple(G, g) -> bool:
    """Squarefree characteristic polynomial, i.e. distinct eigenvalues over the closure."""
    _require_matrix(G)
    A = np.asarray(G.element(g))[None]
    return bool(_rs_flags(G.backend.field, A, {})[0])


@dataclass
class RSFraction:
    count: int
    total: int
    fraction: float
    exact: str | None
    radius: float
    mode: str
    q: int | None
    one_minus: float
    inverse_q: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def rs_fraction(G, mode: str = "auto", samples: int = 10**5, rng=None) -> RSFraction:
    """Proportion of regular semisimple elements, exactly or by Monte Carlo."""
    _require_matrix(G)
    F = G.backend.field
    q = G.meta.get("q")
    cache = {}
    enumerable = getattr(G, "enumerable", False)
    if mode == "auto":
        mode = "exact" if enumerable else "sampled"
    if mode == "exact":
        if not enumerable:
            raise CapExceeded(f"{G.name} is above the enumeration cap; use sampled mode")
        count = 0
        for s in range(0, G.n, 1 << 16):
            count += int(_rs_flags(F, G.elements[s:s + (1 << 16)], cache).sum())
        frac = Fraction(count, G.n)
        return RSFraction(count, G.n, float(frac), str(frac), 0.0, "exact", q,
                          1 - float(frac), 1 / q if q else None)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    rng = rng if rng is not None else np.random.default_rng(0)
    count = 0
    for s in range(0, samples, 1 << 14):
        m = min(samples - s, 1 << 14)
        if enumerable:
            mats = G.elements[rng.integers(G.n, size=m)]
        else:
            mats = G.backend.decode(G.random_elements(rng, m))
        count += int(_rs_flags(F, mats, cache).sum())
    p = count / samples
    radius = 3 * sqrt(p * (1 - p) / samples)
    return RSFraction(count, samples, p, None, radius, "sampled", q, 1 - p, 1 / q if q else None)


# generation by random pairs ------------------------------------------------------


@dataclass
class GenerationReport:
    trials: int
    generated: int
    frequency: float
    value_set_size: int

    def to_dict(self) -> dict:
        return asdict(self)


def random_pair_generates(L, words, trials: int = 200, rng=None, workers: int = 1) -> GenerationReport:
    """Fraction of seeded trials where two uniform elements of the value set generate L."""
    W = word_value_set(L, words, mode="exact").mask
    rng = rng if rng is not None else np.random.default_rng(0)
    members = W.indices()
    pairs = members[rng.integers(members.size, size=(trials, 2))]
    # a proper subgroup has at most n/2 elements, so larger closures are all of L
    limit = L.n // 2

    def gen(pair):
        _, size = kernels.closure(L.table, pair, limit)
        return size > limit or size == L.n

    hits = int(sum(pmap(gen, list(pairs), workers)))
    return GenerationReport(trials, hits, hits / trials if trials else 0.0, W.size)
