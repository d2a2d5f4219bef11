"""Normalized bar cochains on small groups.

This is the direct textbook computation: a t-cochain is an array of shape
``(n,)*t + (dim V,)`` indexed by group elements (identity = index 0), and a
cochain is normalized when it vanishes as soon as one argument is the
identity.  It is exponential in t, so it is meant for groups of order up to
about ten and serves as a cross-check for the Sylow-based engine.
"""
from __future__ import annotations

import numpy as np

from .. import linalg
from .groups import PermGroup

__all__ = ["BarGroup", "BarCohomology", "CohomologyClass"]


class BarGroup:
    """Finite group from a multiplication table with identity at index 0."""

    def __init__(self, table: np.ndarray, name: str = ""):
        self.table = np.asarray(table, dtype=np.int64)
        self.n = len(self.table)
        if not np.array_equal(self.table[0], np.arange(self.n)):
            raise ValueError("identity must be element 0")
        self.inv = np.argmax(self.table == 0, axis=1)
        self.name = name
        self.perms = None

    @classmethod
    def from_permgroup(cls, G: PermGroup) -> "BarGroup":
        E = G.elements
        n = len(E)
        table = G.index(E[:, E].reshape(n * n, -1)).reshape(n, n)
        out = cls(table, G.name)
        out.perms = E
        return out

    def product(self, other: "BarGroup") -> "BarGroup":
        """G x H with index g * |H| + h."""
        nA, nB = self.n, other.n
        ia = np.arange(nA * nB) // nB
        ib = np.arange(nA * nB) % nB
        table = self.table[ia[:, None], ia[None, :]] * nB + other.table[ib[:, None], ib[None, :]]
        return BarGroup(table, f"{self.name}x{other.name}")


class BarCohomology:
    """H^t(G, V) from normalized bar cochains."""

    def __init__(self, G: BarGroup, ell: int, rho: np.ndarray | None = None):
        self.G, self.ell = G, ell
        if rho is None:
            rho = np.ones((G.n, 1, 1), dtype=np.int64)
        self.rho = np.asarray(rho, dtype=np.int64) % ell
        self.dv = self.rho.shape[1]
        self._cache: dict = {}

    # cochains -----------------------------------------------------------------
    def shape(self, t: int) -> tuple:
        return (self.G.n,) * t + (self.dv,)

    def normalized_index(self, t: int) -> np.ndarray:
        """Flat indices of the free coordinates of normalized t-cochains."""
        mask = np.ones(self.shape(t), dtype=bool)
        for axis in range(t):
            sl = [slice(None)] * (t + 1)
            sl[axis] = 0
            mask[tuple(sl)] = False
        return np.flatnonzero(mask.ravel())

    def delta(self, f: np.ndarray, t: int) -> np.ndarray:
        """Bar coboundary of a batch of t-cochains, shape ``shape(t) + (B,)``."""
        n, p, T = self.G.n, self.ell, self.G.table
        out = np.einsum("auv,...vb->a...ub", self.rho, f)  # g1 . f(g2, ..., g_{t+1})
        idx = np.indices((n,) * (t + 1), sparse=True)
        for i in range(t):
            args = list(idx[:i]) + [T[idx[i], idx[i + 1]]] + list(idx[i + 2 :])
            out = out + (-1) ** (i + 1) * f[tuple(args)]
        out = out + (-1) ** (t + 1) * f[tuple(idx[:t])]
        return out % p

    def delta_matrix(self, t: int) -> np.ndarray:
        src = self.normalized_index(t)
        dst = self.normalized_index(t + 1)
        size = int(np.prod(self.shape(t)))
        E = np.zeros((size, len(src)), dtype=np.int64)
        E[src, np.arange(len(src))] = 1
        img = self.delta(E.reshape(self.shape(t) + (len(src),)), t)
        return img.reshape(-1, len(src))[dst]

    def _data(self, t: int):
        if t not in self._cache:
            p = self.ell
            Z = linalg.nullspace(self.delta_matrix(t), p)
            B = self.delta_matrix(t - 1) if t > 0 else np.zeros((Z.shape[0], 0), dtype=np.int64)
            piv = linalg.independent_columns(np.hstack([B, Z]), p) if Z.shape[0] else []
            Bb = B[:, [c for c in piv if c < B.shape[1]]]
            H = Z[:, [c - B.shape[1] for c in piv if c >= B.shape[1]]]
            self._cache[t] = (H, linalg.Solver(np.hstack([H, Bb]), p))
        return self._cache[t]

    def dim(self, t: int) -> int:
        return self._data(t)[0].shape[1]

    def basis(self, t: int) -> np.ndarray:
        """Full cochain arrays (flattened, as columns) of a basis of H^t."""
        H = self._data(t)[0]
        full = np.zeros((int(np.prod(self.shape(t))), H.shape[1]), dtype=np.int64)
        full[self.normalized_index(t)] = H
        return full

    def is_cocycle(self, f: np.ndarray, t: int) -> bool:
        f = np.asarray(f)
        f = f.reshape(self.shape(t) + (f.size // int(np.prod(self.shape(t))),))
        return not np.any(self.delta(f, t))

    def coords(self, t: int, f: np.ndarray) -> np.ndarray:
        """Coordinates of cocycles (flattened full arrays as columns) in basis(t)."""
        size = int(np.prod(self.shape(t)))
        f = np.asarray(f, dtype=np.int64)
        f = f.reshape(size, f.size // size) % self.ell
        if not self.is_cocycle(f, t):
            raise ValueError("not a cocycle")
        H, solver = self._data(t)
        return solver.solve(f[self.normalized_index(t)])[: H.shape[1]]

    # maps ------------------------------------------------------------------
    def pullback(self, source: "BarCohomology", phi: np.ndarray, t: int, alpha=None) -> np.ndarray:
        """Matrix of f -> alpha . f(phi(-), ..., phi(-)) from H^t(self) to H^t(source)."""
        B = self.basis(t).reshape(self.shape(t) + (-1,))
        idx = np.indices((source.G.n,) * t, sparse=True)
        img = B[tuple(phi[i] for i in idx)] if t else B
        if alpha is not None:
            img = np.einsum("uv,...vb->...ub", alpha, img)
        return source.coords(t, img.reshape(int(np.prod(source.shape(t))), B.shape[-1]))

    def transfer(self, sub: "BarCohomology", emb: np.ndarray, t: int) -> np.ndarray:
        """Matrix of cor: H^t(sub) -> H^t(self) for sub embedded by ``emb``."""
        G, p = self.G, self.ell
        n = G.n
        emb = np.asarray(emb, dtype=np.int64)
        pos = -np.ones(n, dtype=np.int64)
        pos[emb] = np.arange(len(emb))
        # x = h r with r the least element of the right coset H x
        rcos = G.table[emb][:, :].min(axis=0)
        pi = pos[G.table[np.arange(n), G.inv[rcos]]]
        lcos = G.table[:, emb].min(axis=1)
        lreps = np.unique(lcos)
        fB = sub.basis(t).reshape(sub.shape(t) + (-1,))
        ncls = fB.shape[-1]
        out = np.zeros(self.shape(t) + (ncls,), dtype=np.int64)
        idx = np.indices((n,) * t, sparse=True)
        # homogeneous points x_0 = 1, x_k = g_1 ... g_k
        xs = [np.zeros((1,) * t, dtype=np.int64)]
        for k in range(t):
            xs.append(G.table[xs[-1], idx[k]])
        hT, hinv = sub.G.table, sub.G.inv
        for s in lreps:
            ys = [pi[G.table[G.inv[s], x]] for x in xs]  # pi(s^{-1} x_k) in H
            # homogeneous F_H(h_0, ..., h_t) = h_0 f(h_0^{-1} h_1, ...)
            args = tuple(hT[hinv[ys[k]], ys[k + 1]] for k in range(t))
            vals = fB[args] if t else fB
            vals = np.broadcast_to(vals, (n,) * t + vals.shape[-2:])
            # s . h_0 acting on V (h_0 = pi(s^{-1}))
            h0 = int(np.asarray(ys[0]).ravel()[0])
            m = self.rho[s] @ self.rho[emb[h0]] % p
            out = (out + np.einsum("uv,...vb->...ub", m, vals)) % p
        return self.coords(t, out.reshape(int(np.prod(self.shape(t))), ncls))

    def cross(self, other: "BarCohomology", prod: "BarCohomology", i: int, j: int) -> np.ndarray:
        """Cross products of basis classes, as coordinates in H^{i+j}(G x H).

        Column ``a * dim_j + b`` is ``x_a x y_b``; trivial coefficients only.
        """
        if self.dv != 1 or other.dv != 1:
            raise ValueError("cross product implemented for trivial coefficients")
        X = self.basis(i).reshape((self.G.n,) * i + (-1,))
        Y = other.basis(j).reshape((other.G.n,) * j + (-1,))
        nB = other.G.n
        idx = np.indices((prod.G.n,) * (i + j), sparse=True)
        xa = X[tuple(k // nB for k in idx[:i])] if i else X
        yb = Y[tuple(k % nB for k in idx[i:])] if j else Y
        xa = np.broadcast_to(xa, (prod.G.n,) * (i + j) + X.shape[-1:]) if i + j else xa
        yb = np.broadcast_to(yb, (prod.G.n,) * (i + j) + Y.shape[-1:]) if i + j else yb
        f = (xa[..., :, None] * yb[..., None, :]) % self.ell
        return prod.coords(i + j, f.reshape(-1, X.shape[-1] * Y.shape[-1]))


class CohomologyClass:
    """A class of H^t(G, V) stored by a normalized bar representative."""

    def __init__(self, space: BarCohomology, t: int, representative: np.ndarray):
        rep = np.asarray(representative, dtype=np.int64) % space.ell
        if not space.is_cocycle(rep, t):
            raise ValueError("representative is not a cocycle")
        self.space, self.t = space, t
        self.representative = rep.reshape(space.shape(t))

    @property
    def coords(self) -> np.ndarray:
        return self.space.coords(self.t, self.representative.reshape(-1, 1))[:, 0]

    def __eq__(self, other) -> bool:
        return (isinstance(other, CohomologyClass) and other.space is self.space and other.t == self.t
                and np.array_equal(self.coords, other.coords))
