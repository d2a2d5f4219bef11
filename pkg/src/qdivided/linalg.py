"""Exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries reduced to ``0 <= a < p``.
Dense routines do vectorised Gaussian elimination; :func:`sparse_rank`
streams sparse rows against a fully reduced pivot basis and is used for
the wide incidence matrices that appear in the flag modules.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "reduce",
    "inverses",
    "rref",
    "rank",
    "nullspace",
    "Solver",
    "solve",
    "inverse",
    "independent_columns",
    "complement_basis",
    "sparse_rank",
]


def reduce(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


@lru_cache(maxsize=None)
def inverses(p: int) -> np.ndarray:
    """Table of multiplicative inverses mod p (entry 0 is unused)."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def rref(a, p: int, transform: bool = False):
    """Reduced row echelon form of ``a`` over F_p.

    Returns ``(R, pivots)`` or, with ``transform=True``, ``(R, pivots, T)``
    where ``T`` is invertible and ``T @ a == R (mod p)``.
    """
    a = reduce(a, p)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = a.shape
    if transform:
        a = np.hstack([a, np.eye(m, dtype=np.int64)])
    inv = inverses(p)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = (a[r, c:] * inv[piv]) % p
        f = a[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(f[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    if transform:
        return a[:, :n], pivots, a[:, n:]
    return a, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Columns spanning ``{x : a @ x = 0}``; shape ``(ncols, nullity)``."""
    a = reduce(a, p)
    m, n = a.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for i, pc in enumerate(piv):
            basis[pc, k] = (-r[i, c]) % p
    return basis


class Solver:
    """Repeated solves of ``a @ x = b`` for a fixed matrix ``a``.

    ``solve`` returns one particular solution (free variables set to 0) and
    raises ``ValueError`` if ``b`` is outside the column space.
    """

    def __init__(self, a, p: int):
        a = reduce(a, p)
        self.p = p
        self.shape = a.shape
        m, n = a.shape
        if m == 0:
            self.pivots: list[int] = []
            self.t = np.zeros((0, 0), dtype=np.int64)
        else:
            _, self.pivots, self.t = rref(a, p, transform=True)
        self.rank = len(self.pivots)

    def solve(self, b, check: bool = True) -> np.ndarray:
        b = reduce(b, self.p)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        m, n = self.shape
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        if m:
            tb = (self.t @ b) % self.p
            if check and np.any(tb[self.rank:]):
                raise ValueError("right-hand side is not in the column space")
            x[self.pivots] = tb[: self.rank]
        return x[:, 0] if vec else x

    def contains(self, b) -> np.ndarray:
        """Boolean per column of ``b``: is it in the column space?"""
        b = reduce(b, self.p)
        if b.ndim == 1:
            b = b[:, None]
        if self.shape[0] == 0:
            return np.ones(b.shape[1], dtype=bool)
        tb = (self.t @ b) % self.p
        return ~np.any(tb[self.rank:], axis=0)


def solve(a, b, p: int) -> np.ndarray:
    return Solver(a, p).solve(b)


def inverse(a, p: int) -> np.ndarray:
    a = reduce(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    r, piv, t = rref(a, p, transform=True)
    if len(piv) != n:
        raise ValueError("matrix is singular mod %d" % p)
    return t


def independent_columns(a, p: int) -> list[int]:
    """Indices of a maximal set of independent columns (the pivot columns)."""
    a = np.asarray(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return []
    return rref(a, p)[1]


def complement_basis(sub, amb_dim: int, p: int) -> np.ndarray:
    """Standard basis vectors completing the column span of ``sub`` to F_p^n."""
    if amb_dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    sub = reduce(sub, p)
    sub = sub.reshape(amb_dim, sub.size // amb_dim)
    stacked = np.hstack([sub, np.eye(amb_dim, dtype=np.int64)])
    piv = independent_columns(stacked, p)
    k = sub.shape[1]
    extra = [c - k for c in piv if c >= k]
    return np.eye(amb_dim, dtype=np.int64)[:, extra]


def sparse_rank(rows, ncols: int, p: int) -> int:
    """Rank over F_p of a matrix given as an iterable of sparse rows.

    Each row is a pair ``(indices, values)``. Memory is
    ``rank * ncols``, so pass the orientation whose rows are the longer side.
    """
    inv = inverses(p)
    cap = 16
    basis = np.zeros((cap, ncols), dtype=np.int64)
    pivcols = np.zeros(cap, dtype=np.int64)
    k = 0
    v = np.zeros(ncols, dtype=np.int64)
    for idx, vals in rows:
        v[:] = 0
        np.add.at(v, np.asarray(idx, dtype=np.int64), np.asarray(vals, dtype=np.int64))
        v %= p
        if k:
            coef = v[pivcols[:k]]
            sel = np.flatnonzero(coef)
            if sel.size:
                v = (v - coef[sel] @ basis[sel]) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        c = int(nz[0])
        if v[c] != 1:
            v = (v * inv[v[c]]) % p
        if k:
            f = basis[:k, c].copy()
            sel = np.flatnonzero(f)
            if sel.size:
                basis[sel] = (basis[sel] - np.outer(f[sel], v)) % p
        if k == cap:
            cap *= 2
            basis = np.vstack([basis, np.zeros_like(basis)])
            pivcols = np.concatenate([pivcols, np.zeros_like(pivcols)])
        basis[k] = v
        pivcols[k] = c
        k += 1
        if k == ncols:
            break
        v = np.zeros(ncols, dtype=np.int64)
    return k
