"""Finite fields GF(q) as lookup tables over the integers 0..q-1.

An integer ``a`` stands for the polynomial whose coefficients are the base-p
digits of ``a`` (least significant digit = constant term), reduced modulo a
fixed monic irreducible.  The integer order on 0..q-1 is the total order used
for canonical forms elsewhere in the package.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
from sympy import factorint

from .errors import CapExceeded, InputError

MAX_FIELD_SIZE = 1024


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, f) with q = p**f, or raise InputError."""
    if q < 2:
        raise InputError(f"{q} is not a prime power")
    fac = factorint(q)
    if len(fac) != 1:
        raise InputError(f"{q} is not a prime power")
    ((p, f),) = fac.items()
    return int(p), int(f)


def _digits(a: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        out.append(a % p)
        a //= p
    return out


def _polymulmod(a, b, modulus, p):
    # coefficient lists, low degree first; modulus is monic of degree f
    f = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for j in range(f + 1):
                prod[k - f + j] = (prod[k - f + j] - c * modulus[j]) % p
    return (prod + [0] * f)[:f]


def _is_irreducible(poly, p):
    """True when the monic ``poly`` (low degree first) is irreducible over GF(p)."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            div = list(tail) + [1]
            # polynomial long division remainder
            rem = list(poly)
            for k in range(deg, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Least monic irreducible of degree f over GF(p), coefficients low degree first.

    Candidates are ordered by the integer whose base-p digits are the
    non-leading coefficients.
    """
    for code in range(p**f):
        poly = tuple(_digits(code, p, f)) + (1,)
        if f == 1 or (poly[0] != 0 and _is_irreducible(poly, p)):
            return poly
    raise AssertionError("no irreducible polynomial found")


class GFqField:
    """GF(q) with dense addition/multiplication tables."""

    def __init__(self, q: int):
        p, f = prime_power(q)
        if q > MAX_FIELD_SIZE:
            raise CapExceeded(f"field size {q} above table limit {MAX_FIELD_SIZE}")
        self.p, self.f, self.q = p, f, q
        self.modulus = least_irreducible(p, f)
        dt = np.int16 if q <= 32767 else np.int32
        digits = np.array([_digits(a, p, f) for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(f, dtype=np.int64)
        add = (digits[:, None, :] + digits[None, :, :]) % p
        self.add = (add @ weights).astype(dt)
        self.neg = (((-digits) % p) @ weights).astype(dt)
        if f == 1:
            a = np.arange(q, dtype=np.int64)
            self.mul = ((a[:, None] * a[None, :]) % p).astype(dt)
        else:
            mul = np.zeros((q, q), dtype=dt)
            polys = [list(r) for r in digits]
            for a in range(q):
                for b in range(a, q):
                    c = _polymulmod(polys[a], polys[b], self.modulus, p)
                    v = sum(ci * p**i for i, ci in enumerate(c))
                    mul[a, b] = mul[b, a] = v
            self.mul = mul
        self.sub = self.add[:, self.neg]
        inv = np.zeros(q, dtype=dt)
        rows, cols = np.nonzero(self.mul == 1)
        inv[rows] = cols
        self.inv = inv
        self.primitive = self._find_primitive()

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GFqField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    @property
    def is_prime(self) -> bool:
        return self.f == 1

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        e %= self.q - 1
        r, b = 1, int(a)
        while e:
            if e & 1:
                r = int(self.mul[r, b])
            b = int(self.mul[b, b])
            e >>= 1
        return r

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        k, x = 1, int(a)
        while x != 1:
            x = int(self.mul[x, a])
            k += 1
        return k

    def _find_primitive(self) -> int:
        for a in range(1, self.q):
            if self.order(a) == self.q - 1:
                return a
        raise AssertionError("multiplicative group is not cyclic")

    def frobenius(self, a, k: int = 1):
        """a -> a**(p**k), vectorised over arrays."""
        e = self.p**k
        tab = np.array([self.power(x, e) for x in range(self.q)], dtype=self.add.dtype)
        return tab[a]

    def prime_basis(self) -> list[int]:
        """The GF(p)-basis 1, x, ..., x^(f-1) as field integers."""
        return [self.p**i for i in range(self.f)]

    def subfield_elements(self, q0: int) -> np.ndarray:
        """Elements of the subfield of order q0 (fixed points of a -> a**q0)."""
        fixed = [a for a in range(self.q) if self.power(a, q0) == a]
        if len(fixed) != q0:
            raise InputError(f"GF({self.q}) has no subfield of order {q0}")
        return np.array(fixed, dtype=self.add.dtype)
