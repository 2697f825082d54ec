"""Convolution operator of a symmetric set and its spectrum on the augmentation ideal.

X has x[g, h] = 1 iff h^-1 g lies in B, so (Xv)[g] = sum over b in B of v[g b^-1].
The all-ones vector e is an eigenvector with eigenvalue |B|; its orthogonal
complement I is X-invariant and every eigenspace there is a nontrivial
G-module, which forces lambda^2 <= n|B|/k.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import sqrt

import numpy as np

from . import kernels
from .characters import min_nontrivial_degree
from .config import EIG_MAXITER, EIG_TOL, VERIFY_SLACK
from .errors import CapExceeded, ConvergenceError, InputError, TheoremViolation
from .subsets import SubsetMask


@dataclass
class ConvolutionOperator:
    group: object
    subset: SubsetMask
    dense: np.ndarray = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def size(self) -> int:
        return self.subset.size

    def apply(self, v: np.ndarray) -> np.ndarray:
        if self.dense is not None:
            return self.dense @ v
        binv = self.group.inverses[self.subset.indices()]
        return kernels.conv_apply(self.group.table, binv, v)

    def trace_of_square(self) -> int:
        """Exact count of pairs (g, h) with x[g,h] = x[h,g] = 1."""
        if self.dense is not None:
            X = self.dense.astype(np.int64)
            return int((X * X.T).sum())
        # (X^2)[g, g] counts b1, b2 in B with g b1^-1 b2^-1 = g, i.e. b2 = b1^-1
        idx = self.subset.indices()
        return self.n * int(self.subset.mask[self.group.inverses[idx]].sum())

    def entry_sum(self) -> int:
        if self.dense is not None:
            return int(self.dense.sum())
        return self.n * self.size


def build_operator(G, B: SubsetMask, dense=None) -> ConvolutionOperator:
    """Check B = B^-1 and set up X; materialised when n <= caps.dense."""
    if B.group is not G:
        raise InputError("subset belongs to a different group")
    bad = B.asymmetric_element()
    if bad is not None:
        raise InputError(
            f"B is not symmetric: element {bad} is in B but its inverse "
            f"{int(G.inverses[bad])} is not"
        )
    if dense is None:
        dense = G.n <= G.caps.dense
    X = None
    if dense:
        if G.n > G.caps.dense:
            raise CapExceeded(f"dense operator for order {G.n} exceeds dense cap {G.caps.dense}")
        T = G.table
        X = np.zeros((G.n, G.n), dtype=np.float64)
        cols = np.arange(G.n)
        for b in B.indices():
            X[T[:, b], cols] = 1.0
    op = ConvolutionOperator(G, B, X)
    ones = op.apply(np.ones(G.n))
    if not np.all(ones == B.size):
        raise TheoremViolation("row sums of the convolution operator differ from |B|")
    return op


@dataclass
class SpectralReport:
    n: int
    size: int
    k: int | None
    lambda1: float
    max_abs_ideal: float
    bound: float | None
    trace_x2: int
    trace_expected: int
    rowsum_exact: bool
    method: str
    iterations: int
    tol: float
    residual: float
    eigenvalues: list | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _ideal_spectrum_dense(X):
    n = X.shape[0]
    # P X P with P the projector onto e-perp; e itself contributes one zero
    rs = X.sum(axis=1, keepdims=True) / n
    cs = X.sum(axis=0, keepdims=True) / n
    PXP = X - rs - cs + X.sum() / n**2
    w = np.linalg.eigvalsh((PXP + PXP.T) / 2)
    drop = int(np.argmin(np.abs(w)))
    return np.delete(w, drop)


def lanczos_extremes(apply, n, rng, tol=EIG_TOL, maxiter=EIG_MAXITER, deflate=True):
    """Smallest and largest eigenvalue of a symmetric operator, restricted to e-perp.

    Lanczos with full reorthogonalisation.  Each Krylov vector is projected
    off e, so the iteration never leaves the augmentation ideal.
    """
    dim = n - 1 if deflate else n
    if dim <= 0:
        return 0.0, 0.0, 0, 0.0

    def proj(v):
        return v - v.mean() if deflate else v

    v = proj(rng.standard_normal(n))
    v /= np.linalg.norm(v)
    m_max = min(maxiter, dim)
    Q = np.empty((m_max + 1, n))
    Q[0] = v
    alpha, beta = [], []
    lo = hi = 0.0
    resid = np.inf
    for j in range(m_max):
        w = proj(apply(Q[j]))
        a = float(Q[j] @ w)
        alpha.append(a)
        w -= a * Q[j]
        if j:
            w -= beta[-1] * Q[j - 1]
        w -= Q[: j + 1].T @ (Q[: j + 1] @ w)
        w -= Q[: j + 1].T @ (Q[: j + 1] @ w)
        b = float(np.linalg.norm(w))
        Tm = np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)
        theta, S = np.linalg.eigh(Tm)
        lo, hi = float(theta[0]), float(theta[-1])
        scale = max(1.0, abs(lo), abs(hi))
        resid = b * max(abs(S[-1, 0]), abs(S[-1, -1]))
        if b <= tol * scale or resid <= tol * scale:
            return lo, hi, j + 1, resid
        if j + 1 == m_max:
            break
        beta.append(b)
        Q[j + 1] = w / b
    if len(alpha) == dim:
        # the Krylov space is all of e-perp, so the Ritz values are exact
        return lo, hi, len(alpha), resid
    raise ConvergenceError(
        f"Lanczos did not converge in {len(alpha)} iterations (residual {resid:.3g})", resid
    )


def spectrum_on_ideal(op: ConvolutionOperator, k=None, rng=None, tol=EIG_TOL,
                      maxiter=EIG_MAXITER, full=False) -> SpectralReport:
    G, n, size = op.group, op.n, op.size
    if k is None and n > 1:
        k = min_nontrivial_degree(G)
    ones = op.apply(np.ones(n))
    rowsum_exact = bool(np.all(ones == size))
    trace = op.trace_of_square()
    if trace != n * size or op.entry_sum() != n * size:
        raise TheoremViolation(f"tr(X^2) = {trace}, expected n|B| = {n * size}")
    eigs = None
    if op.dense is not None:
        w = _ideal_spectrum_dense(op.dense) if n > 1 else np.zeros(0)
        max_abs = float(np.abs(w).max()) if w.size else 0.0
        method, iters, resid = "dense", 0, 0.0
        if full:
            eigs = [float(x) for x in np.sort(w)]
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        lo, hi, iters, resid = lanczos_extremes(op.apply, n, rng, tol, maxiter)
        max_abs = max(abs(lo), abs(hi))
        method = "lanczos"
    bound = sqrt(n * size / k) if k else None
    return SpectralReport(
        n=n, size=size, k=k, lambda1=float(size), max_abs_ideal=max_abs, bound=bound,
        trace_x2=trace, trace_expected=n * size, rowsum_exact=rowsum_exact,
        method=method, iterations=iters, tol=tol, residual=float(resid), eigenvalues=eigs,
    )


@dataclass
class MixingCheck:
    holds: bool
    margin: float
    report: SpectralReport

    def to_dict(self) -> dict:
        return {"holds": self.holds, "margin": self.margin, "spectral": self.report.to_dict()}


def verify_mixing_bound(G, B: SubsetMask, k=None, strict=False, slack=VERIFY_SLACK,
                        dense=None, rng=None) -> MixingCheck:
    """(max |lambda| on I)^2 <= n|B|/k; a failure is an implementation bug."""
    rep = spectrum_on_ideal(build_operator(G, B, dense=dense), k=k, rng=rng)
    if rep.k is None:
        return MixingCheck(True, 0.0, rep)
    limit = rep.n * rep.size / rep.k
    margin = limit - rep.max_abs_ideal**2
    holds = margin >= -slack
    if strict and not holds:
        raise TheoremViolation(
            f"spectral bound violated: max|lambda|^2 = {rep.max_abs_ideal**2:.6g} > n|B|/k = {limit:.6g}"
        )
    return MixingCheck(bool(holds), float(margin), rep)


@dataclass
class TripleWitness:
    witness: tuple | None
    status: str
    above_threshold: bool
    threshold: float
    product: int
    certificate: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = list(self.witness) if self.witness else None
        return d


def _spectral_certificate(G, A, B, C, k):
    """Certificate that ab = c is solvable, when one of the sets is symmetric.

    Rotating the equation so that the symmetric set S sits in the middle, a
    solution exists as soon as |L| |S|^2 |R| > lambda^2 n (n - |L|), with lambda
    the largest |eigenvalue| of X_S on the augmentation ideal.
    """
    if B.is_symmetric():
        left, mid, right, name = A, B, C, "B"
    elif C.is_symmetric():  # ab = c  <=>  a^-1 c = b
        left, mid, right, name = A.inverse(), C, B, "C"
    elif A.is_symmetric():  # ab = c  <=>  c^-1 a = b^-1
        left, mid, right, name = C.inverse(), A, B.inverse(), "A"
    else:
        return None
    n = G.n
    rep = spectrum_on_ideal(build_operator(G, mid), k=k)
    lhs = left.size * mid.size**2 * right.size
    rhs = rep.max_abs_ideal**2 * n * (n - left.size)
    return {"symmetric_set": name, "lambda_ideal": rep.max_abs_ideal,
            "lhs": float(lhs), "rhs": float(rhs), "certifies": bool(lhs > rhs + VERIFY_SLACK)}


def mixing_triple_witness(G, A: SubsetMask, B: SubsetMask, C: SubsetMask, k=None,
                          certify=False) -> TripleWitness:
    """First (a, b) in index order with ab in C, or a certified absence."""
    n = G.n
    if k is None:
        k = min_nontrivial_degree(G) if n > 1 else 1
    product = A.size * B.size * C.size
    threshold = n**3 / k
    above = product > threshold
    cert = _spectral_certificate(G, A, B, C, k) if certify and n > 1 else None
    ai, bi = A.indices(), B.indices()
    i, j = kernels.first_product(G.table, ai, bi, C.mask)
    if i >= 0:
        a, b = int(ai[i]), int(bi[j])
        return TripleWitness((a, b, int(G.table[a, b])), "witness", above, threshold, product, cert)
    if above:
        raise TheoremViolation(
            f"no solution of ab = c although |A||B||C| = {product} > n^3/k = {threshold:.6g}"
        )
    return TripleWitness(None, "certified-none", above, threshold, product, cert)
