"""Free resolutions over group algebras of ell-groups and chain-level maps.

An element of the free module ``F_k = F[S]^{r_k}`` is stored as an array of
shape ``(r_k, |S|)``: entry ``[i, x]`` is the coefficient of ``x * e_i``.
Flattened, index ``i * |S| + x``.  Left multiplication by ``a`` sends the
coefficient at ``x`` to ``a x``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .. import linalg

__all__ = ["LGroup", "Resolution", "TensorResolution", "expand", "SCohomology"]


class LGroup:
    """A finite group given by its multiplication table (identity at index 0).

    ``elements`` optionally records an embedding into an ambient permutation
    group; several embeddings may share one resolution.
    """

    def __init__(self, ell: int, table: np.ndarray, gens, elements=None, resolution=None, keyfn=None):
        self.ell = ell
        self.table = np.asarray(table, dtype=np.int64)
        self.n = len(self.table)
        self.gens = [int(g) for g in gens]
        self.elements = elements
        self._resolution = resolution
        self._keyfn = keyfn
        self._subgroups: dict = {}

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    @cached_property
    def _key_index(self):
        k = self._keyfn(self.elements)
        order = np.argsort(k)
        return k[order], order

    def index(self, perms) -> np.ndarray:
        sk, order = self._key_index
        k = np.atleast_1d(self._keyfn(np.atleast_2d(perms)))
        pos = np.minimum(np.searchsorted(sk, k), len(sk) - 1)
        out = np.where(sk[pos] == k, order[pos], -1)
        return out

    def resolution(self) -> "Resolution":
        if self._resolution is None:
            self._resolution = Resolution(self)
        return self._resolution

    @classmethod
    def from_permgroup(cls, ell: int, P) -> "LGroup":
        E = P.elements
        n = len(E)
        prods = E[:, E].reshape(n * n, -1) if n else E  # prods[i*n+j] = E[i][E[j]]
        idx = P.index(prods).reshape(n, n)
        if np.any(idx < 0):
            raise ArithmeticError("elements do not close under multiplication")
        gens = P.index(P.gens) if len(P.gens) else np.zeros(0, dtype=np.int64)
        return cls(ell, idx, list(gens), elements=E, keyfn=P.keys)

    def embedded(self, elements: np.ndarray, keyfn) -> "LGroup":
        """Same abstract group (and resolution) with a new embedding."""
        return LGroup(self.ell, self.table, self.gens, elements, self.resolution(), keyfn)

    @classmethod
    def product(cls, A: "LGroup", B: "LGroup", elements: np.ndarray, keyfn) -> "LGroup":
        """A x B with index a * |B| + b and the tensor-product resolution."""
        nA, nB = A.n, B.n
        ia = np.arange(nA * nB) // nB
        ib = np.arange(nA * nB) % nB
        table = A.table[ia[:, None], ia[None, :]] * nB + B.table[ib[:, None], ib[None, :]]
        gens = [g * nB for g in A.gens] + list(B.gens)
        G = cls(A.ell, table, gens, elements, None, keyfn)
        G._resolution = TensorResolution(G, A.resolution(), B.resolution())
        return G

    def subgroup(self, idx) -> tuple["LGroup", np.ndarray]:
        """Subgroup on the given element indices (identity first); cached."""
        idx = np.asarray(idx, dtype=np.int64)
        idx = np.concatenate([[0], np.sort(idx[idx != 0])])
        key = idx.tobytes()
        if key not in self._subgroups:
            pos = -np.ones(self.n, dtype=np.int64)
            pos[idx] = np.arange(len(idx))
            table = pos[self.table[idx[:, None], idx[None, :]]]
            if np.any(table < 0):
                raise ArithmeticError("not a subgroup")
            gens = _generators(table)
            els = self.elements[idx] if self.elements is not None else None
            sub = LGroup(self.ell, table, gens, els, None, self._keyfn)
            self._subgroups[key] = (sub, idx)
        return self._subgroups[key]


def _generators(table: np.ndarray) -> list[int]:
    n = len(table)
    inside = np.zeros(n, dtype=bool)
    inside[0] = True
    gens: list[int] = []
    while not inside.all():
        g = int(np.flatnonzero(~inside)[0])
        gens.append(g)
        members = np.flatnonzero(inside)
        while True:
            new = np.unique(np.concatenate([table[members][:, gens].ravel(), members]))
            grown = np.zeros(n, dtype=bool)
            grown[new] = True
            if grown.sum() == len(members):
                break
            members = new
        inside = grown
    return gens


def expand(images: np.ndarray, slot: np.ndarray, act: np.ndarray, table: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """Full matrix of a map that is linear over the acting group.

    ``images[j, s]`` (shape ``(r_out, n_out)``) is the image of ``rep_s e_j``;
    the domain basis element ``(j, x)`` maps to ``act[x] * images[j, slot[x]]``.
    """
    m, _, r, n_out = images.shape
    n_in = len(act)
    if m == 0 or r == 0:
        return np.zeros((r * n_out, m * n_in), dtype=np.int64)
    perm = table[inv[act]]  # perm[x, z] = act[x]^{-1} z
    sel = images[:, slot]  # (m, n_in, r, n_out)
    idx = np.broadcast_to(perm[None, :, None, :], sel.shape)
    g = np.take_along_axis(sel, idx, axis=3)
    return g.transpose(2, 3, 0, 1).reshape(r * n_out, m * n_in)


class Resolution:
    """Minimal free resolution of the trivial module over F_ell[S], built lazily."""

    def __init__(self, group: LGroup):
        self.group = group
        self.p = group.ell
        self.ranks = [1]
        self.bnd: list = [None]  # bnd[k]: (r_k, r_{k-1}, n)
        self._full: dict = {}
        self._solvers: dict = {}

    # building ----------------------------------------------------------------
    def extend_to(self, k: int) -> None:
        while len(self.ranks) <= k:
            self._grow()

    def _kernel(self, k: int) -> np.ndarray:
        """Basis (columns) of ker(d_k), with d_0 the augmentation."""
        n, p = self.group.n, self.p
        if k == 0:
            aug = np.ones((1, n), dtype=np.int64)
            return linalg.nullspace(aug, p)
        return linalg.nullspace(self.full(k), p)

    def _grow(self) -> None:
        k = len(self.ranks) - 1
        G, p = self.group, self.p
        n, r = G.n, self.ranks[k]
        K = self._kernel(k)
        if K.shape[1] == 0:
            self.ranks.append(0)
            self.bnd.append(np.zeros((0, r, n), dtype=np.int64))
            return
        # I*K = sum over generators g of (g - 1) K
        blocks = []
        Kr = K.T.reshape(-1, r, n)
        for g in G.gens:
            perm = G.table[G.inv[g]]
            moved = Kr[:, :, perm]
            blocks.append(((moved - Kr) % p).reshape(len(Kr), -1).T)
        IK = np.hstack(blocks) if blocks else np.zeros((r * n, 0), dtype=np.int64)
        if IK.shape[1]:
            piv = linalg.independent_columns(IK, p)
            IK = IK[:, piv]
        stacked = np.hstack([IK, K])
        piv = linalg.independent_columns(stacked, p)
        chosen = [c - IK.shape[1] for c in piv if c >= IK.shape[1]]
        gens = K[:, chosen].T.reshape(len(chosen), r, n)
        self.ranks.append(len(chosen))
        self.bnd.append(gens % p)

    # access --------------------------------------------------------------------
    def rank(self, k: int) -> int:
        self.extend_to(k)
        return self.ranks[k]

    def boundary(self, k: int) -> np.ndarray:
        self.extend_to(k)
        return self.bnd[k]

    def full(self, k: int) -> np.ndarray:
        """Matrix of d_k : F_k -> F_{k-1} (k >= 1)."""
        if k not in self._full:
            G = self.group
            b = self.boundary(k)
            self._full[k] = expand(b[:, None], np.zeros(G.n, dtype=np.int64), np.arange(G.n), G.table, G.inv)
        return self._full[k]

    def lift(self, k: int, Z: np.ndarray) -> np.ndarray:
        """Y with d_k Y = Z for cycles Z in F_{k-1} (columns)."""
        if k not in self._solvers:
            self._solvers[k] = linalg.Solver(self.full(k), self.p)
        return self._solvers[k].solve(Z)

    def trivial_coboundaries_vanish(self, k: int) -> bool:
        """Is the trivial-coefficient coboundary out of degree k zero?"""
        b = self.boundary(k + 1)
        return not np.any(b.sum(axis=2) % self.p)


class TensorResolution(Resolution):
    """Tensor product of resolutions over F[A] and F[B] as a resolution over F[A x B]."""

    def __init__(self, group: LGroup, RA: Resolution, RB: Resolution):
        super().__init__(group)
        self.RA, self.RB = RA, RB
        self.labels = [[(0, 0, 0)]]

    def _grow(self) -> None:
        k = len(self.ranks)
        RA, RB = self.RA, self.RB
        nB = RB.group.n
        n = self.group.n
        labels = []
        for a in range(k + 1):
            b = k - a
            for i in range(RA.rank(a)):
                for j in range(RB.rank(b)):
                    labels.append((a, i, j))
        prev = {lab: s for s, lab in enumerate(self.labels[k - 1])}
        out = np.zeros((len(labels), len(prev), n), dtype=np.int64)
        for s, (a, i, j) in enumerate(labels):
            b = k - a
            if a >= 1:
                da = RA.boundary(a)[i]  # (r_{a-1}, nA)
                for i2 in range(da.shape[0]):
                    row = prev[(a - 1, i2, j)]
                    out[s, row, np.arange(RA.group.n) * nB] += da[i2]
            if b >= 1:
                db = RB.boundary(b)[j]
                sign = -1 if a % 2 else 1
                for j2 in range(db.shape[0]):
                    row = prev[(a, i, j2)]
                    out[s, row, np.arange(nB)] += sign * db[j2]
        self.labels.append(labels)
        self.ranks.append(len(labels))
        self.bnd.append(out % self.p)

    def label(self, k: int) -> list:
        self.extend_to(k)
        return self.labels[k]


# ---------------------------------------------------------------------------
# cohomology of an ell-group with coefficients


class SCohomology:
    """H^t(S, V) computed from the resolution of S.

    ``rho`` is ``None`` for trivial one-dimensional coefficients, otherwise
    an array ``(|S|, dim V, dim V)`` of action matrices.
    """

    def __init__(self, group: LGroup, rho=None):
        self.group = group
        self.R = group.resolution()
        self.p = group.ell
        self.rho = rho
        self.dv = 1 if rho is None else rho.shape[1]
        self._cache: dict = {}

    def evaluation(self, imgs: np.ndarray) -> np.ndarray:
        """Matrix of f -> f(z) for elements ``imgs`` (m, r, n): (m*dv, r*dv)."""
        p = self.p
        if self.rho is None:
            return imgs.sum(axis=2) % p
        m, r, _ = imgs.shape
        blk = np.einsum("jiz,zuv->juiv", imgs, self.rho) % p
        return blk.reshape(m * self.dv, r * self.dv)

    def delta(self, t: int) -> np.ndarray:
        return self.evaluation(self.R.boundary(t + 1))

    def _data(self, t: int):
        if t in self._cache:
            return self._cache[t]
        p, R = self.p, self.R
        dim = R.rank(t) * self.dv
        if self.rho is None and R.trivial_coboundaries_vanish(t) and (t == 0 or R.trivial_coboundaries_vanish(t - 1)):
            data = (np.eye(dim, dtype=np.int64), None)
        else:
            Z = linalg.nullspace(self.delta(t), p) if dim else np.zeros((0, 0), dtype=np.int64)
            B = self.delta(t - 1) if t > 0 else np.zeros((dim, 0), dtype=np.int64)
            piv = linalg.independent_columns(np.hstack([B, Z]), p) if dim else []
            Bb = B[:, [c for c in piv if c < B.shape[1]]]
            H = Z[:, [c - B.shape[1] for c in piv if c >= B.shape[1]]]
            solver = linalg.Solver(np.hstack([H, Bb]), p)
            data = (H, (solver, H.shape[1]))
        self._cache[t] = data
        return data

    def dim(self, t: int) -> int:
        return self._data(t)[0].shape[1]

    def basis(self, t: int) -> np.ndarray:
        """Cocycle representatives (columns) of a basis of H^t."""
        return self._data(t)[0]

    def coords(self, t: int, cochains: np.ndarray) -> np.ndarray:
        H, s = self._data(t)
        if s is None:
            return np.asarray(cochains, dtype=np.int64) % self.p
        solver, h = s
        return solver.solve(cochains)[:h]
