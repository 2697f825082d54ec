"""Permutation groups with a base and strong generating set (Schreier-Sims).

Permutations are tuples ``p`` with ``p[i]`` the image of point ``i``.  Products
compose left to right: ``mul(p, q)`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

from math import prod


def identity(m: int) -> tuple[int, ...]:
    return tuple(range(m))


def mul(p, q):
    return tuple(q[i] for i in p)


def inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p) -> bool:
    return all(i == j for i, j in enumerate(p))


def cycle(m: int, *points: int) -> tuple[int, ...]:
    """The cycle (points[0] points[1] ...) acting on range(m)."""
    p = list(range(m))
    for a, b in zip(points, points[1:] + points[:1]):
        p[a] = b
    return tuple(p)


def fixed_points(p) -> int:
    return sum(1 for i, j in enumerate(p) if i == j)


def cycle_type(p) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


class PermGroup:
    """Stabilizer chain for the group generated by ``gens`` on ``degree`` points."""

    def __init__(self, gens, degree: int):
        self.degree = degree
        self.gens = [tuple(g) for g in gens if not is_identity(g)]
        for g in self.gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {g}")
        self.base: list[int] = []
        self.strong: list[list[tuple]] = []
        self.transversals: list[dict[int, tuple]] = []
        self._schreier_sims()

    def _moved_point(self, g):
        for i, j in enumerate(g):
            if i != j:
                return i
        raise ValueError("identity moves no point")

    def _orbit(self, level):
        beta = self.base[level]
        u = {beta: identity(self.degree)}
        queue = [beta]
        for x in queue:
            for s in self.strong[level]:
                y = s[x]
                if y not in u:
                    u[y] = mul(u[x], s)
                    queue.append(y)
        self.transversals[level] = u

    def _new_level(self, point):
        self.base.append(point)
        self.strong.append([])
        self.transversals.append({point: identity(self.degree)})

    def strip(self, g, start: int = 0):
        """Sift ``g`` down the chain; return (residue, level where it stopped)."""
        for level in range(start, len(self.base)):
            x = g[self.base[level]]
            u = self.transversals[level].get(x)
            if u is None:
                return g, level
            g = mul(g, inv(u))
        return g, len(self.base)

    def _schreier_sims(self):
        for g in self.gens:
            if all(g[b] == b for b in self.base):
                self._new_level(self._moved_point(g))
        for level in range(len(self.base)):
            self.strong[level] = [
                g for g in self.gens if all(g[b] == b for b in self.base[:level])
            ]
            self._orbit(level)
        i = len(self.base) - 1
        while i >= 0:
            restart = None
            for x, ux in list(self.transversals[i].items()):
                for s in self.strong[i]:
                    y = mul(ux, s)
                    schreier = mul(y, inv(self.transversals[i][s[x]]))
                    h, j = self.strip(schreier, i + 1)
                    if j < len(self.base) or not is_identity(h):
                        if j == len(self.base):
                            self._new_level(self._moved_point(h))
                        for level in range(i + 1, j + 1):
                            self.strong[level].append(h)
                            self._orbit(level)
                        restart = j
                        break
                if restart is not None:
                    break
            i = restart if restart is not None else i - 1

    @property
    def order(self) -> int:
        return prod(len(t) for t in self.transversals)

    def contains(self, g) -> bool:
        if len(g) != self.degree:
            return False
        h, level = self.strip(tuple(g))
        return level == len(self.base) and is_identity(h)

    def is_transitive(self) -> bool:
        if self.degree <= 1:
            return True
        seen = {0}
        queue = [0]
        for x in queue:
            for s in self.gens:
                if s[x] not in seen:
                    seen.add(s[x])
                    queue.append(s[x])
        return len(seen) == self.degree
