"""Group cohomology through Sylow subgroups.

A class in ``H^t(K, V)`` is stored by its restriction to the chosen Sylow
ell-subgroup ``S_K``; ``H^t(K, V)`` is the subspace of stable elements,
obtained as the image of ``res^K_{S_K} cor^K_{S_K}``.  Restriction and
corestriction between groups are computed on these coordinates with the
double coset formula, so only ell-groups ever get resolved.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import linalg
from .groups import PermGroup, inverse
from .resolution import LGroup, SCohomology, expand

__all__ = ["GModule", "Engine", "CohomologyResult", "cohomology", "induced_map", "RelationMismatch"]


class RelationMismatch(ValueError):
    pass


class GModule:
    """F_ell-representation of a permutation group.

    ``rho`` maps a batch of permutations (k, degree) to matrices (k, dim, dim).
    """

    def __init__(self, group: PermGroup, dim: int, rho: Callable[[np.ndarray], np.ndarray], ell: int):
        self.group, self.dim, self.ell = group, int(dim), ell
        self._rho = rho

    def rho(self, perms: np.ndarray) -> np.ndarray:
        perms = np.atleast_2d(perms)
        return np.asarray(self._rho(perms), dtype=np.int64).reshape(len(perms), self.dim, self.dim) % self.ell

    @classmethod
    def trivial(cls, group: PermGroup, ell: int, dim: int = 1) -> "GModule":
        return cls(group, dim, lambda P: np.broadcast_to(np.eye(dim, dtype=np.int64), (len(P), dim, dim)), ell)

    @classmethod
    def from_generators(cls, group: PermGroup, mats, ell: int) -> "GModule":
        """Extend per-generator matrices to the whole group, checking consistency."""
        mats = [np.asarray(m, dtype=np.int64) % ell for m in mats]
        if len(mats) != len(group.gens):
            raise ValueError("need one matrix per generator")
        dim = mats[0].shape[0] if mats else 1
        E = group.elements
        table = {}
        ident = group.identity
        table[int(group.keys(ident[None])[0])] = np.eye(dim, dtype=np.int64)
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            mx = table[int(group.keys(x[None])[0])]
            for g, mg in zip(group.gens, mats):
                y = g[x]
                ky = int(group.keys(y[None])[0])
                my = mg @ mx % ell
                if ky in table:
                    if not np.array_equal(table[ky], my):
                        raise ValueError("matrices do not define a representation")
                else:
                    table[ky] = my
                    queue.append(y)
        if len(table) != len(E):
            raise ValueError("generator closure mismatch")

        def rho(P):
            return np.array([table[int(k)] for k in group.keys(P)])

        return cls(group, dim, rho, ell)

    @property
    def is_trivial(self) -> bool:
        if not len(self.group.gens):
            return self.dim == 1
        m = self.rho(self.group.gens)
        return self.dim == 1 and bool(np.all(m == 1))


class Engine:
    """Caches and computes induced maps on Sylow coordinates for one (ell, V)."""

    def __init__(self, ell: int, module: GModule | None = None):
        self.ell = ell
        self.module = None if module is None or module.is_trivial else module
        self._scoh: dict = {}
        self._chains: dict = {}
        self._maps: dict = {}
        self._keep: list = []

    # helpers -----------------------------------------------------------------
    def rho(self, perms):
        return None if self.module is None else self.module.rho(perms)

    def scoh(self, lg: LGroup) -> SCohomology:
        k = id(lg)
        if k not in self._scoh:
            rho = None if self.module is None else self.module.rho(lg.elements)
            self._scoh[k] = (lg, SCohomology(lg, rho))
        return self._scoh[k][1]

    def _alpha_block(self, alpha, r):
        if alpha is None:
            return None
        return np.kron(np.eye(r, dtype=np.int64), alpha)

    # chain maps ----------------------------------------------------------------
    def pullback_chain(self, A: LGroup, B: LGroup, phi: np.ndarray, t: int) -> np.ndarray:
        """Images of the generators of R^A_t under a chain map over phi: A -> B."""
        key = ("pb", id(A), id(B), np.asarray(phi, dtype=np.int64).tobytes())
        if key not in self._chains:
            img0 = np.zeros((1, 1, B.n), dtype=np.int64)
            img0[0, 0, 0] = 1
            self._chains[key] = [img0]
            self._keep.append((A, B))
        imgs = self._chains[key]
        RA, RB, p = A.resolution(), B.resolution(), self.ell
        while len(imgs) <= t:
            k = len(imgs)
            prev = imgs[-1]
            full = expand(prev[:, None], np.zeros(A.n, dtype=np.int64), np.asarray(phi), B.table, B.inv)
            bA = RA.boundary(k)
            rk = bA.shape[0]
            targets = full @ bA.reshape(rk, bA.shape[1] * A.n).T % p
            lifted = RB.lift(k, targets) if rk else np.zeros((RB.rank(k) * B.n, 0), dtype=np.int64)
            imgs.append(lifted.T.reshape(rk, RB.rank(k), B.n))
        return imgs[t]

    def transfer_chain(self, A: LGroup, B: LGroup, emb: np.ndarray, t: int):
        """Chain map Res_A R^B -> R^A on the generators ``rep * e_j``."""
        key = ("tr", id(A), id(B), np.asarray(emb, dtype=np.int64).tobytes())
        if key not in self._chains:
            emb = np.asarray(emb, dtype=np.int64)
            cosets = B.table[emb][:, :]  # cosets[a, b] = a b (as element of B)
            reps_of_b = cosets.min(axis=0)
            reps = np.unique(reps_of_b)
            slot = np.searchsorted(reps, reps_of_b)
            pos = -np.ones(B.n, dtype=np.int64)
            pos[emb] = np.arange(A.n)
            a_of_b = pos[B.table[np.arange(B.n), B.inv[reps_of_b]]]
            if np.any(a_of_b < 0):
                raise RelationMismatch("not a subgroup")
            img0 = np.zeros((1, len(reps), 1, A.n), dtype=np.int64)
            img0[0, :, 0, 0] = 1
            self._chains[key] = ([img0], reps, slot, a_of_b)
            self._keep.append((A, B))
        imgs, reps, slot, a_of_b = self._chains[key]
        RA, RB, p = A.resolution(), B.resolution(), self.ell
        while len(imgs) <= t:
            k = len(imgs)
            full = expand(imgs[-1], slot, a_of_b, A.table, A.inv)
            DB = RB.full(k)
            rk = RB.rank(k)
            cols = (np.arange(rk)[:, None] * B.n + reps[None, :]).ravel()
            targets = full @ DB[:, cols] % p
            lifted = RA.lift(k, targets) if len(cols) else np.zeros((RA.rank(k) * A.n, 0), dtype=np.int64)
            imgs.append(lifted.T.reshape(rk, len(reps), RA.rank(k), A.n))
        return imgs[t], reps

    # maps on S-coordinates -----------------------------------------------------------
    def pullback(self, A: LGroup, B: LGroup, phi, alpha, t: int) -> np.ndarray:
        """H^t(B) -> H^t(A) along phi (indices of A's elements in B)."""
        p = self.ell
        img = self.pullback_chain(A, B, phi, t)
        SA, SB = self.scoh(A), self.scoh(B)
        P = SB.evaluation(img)
        if alpha is not None:
            P = self._alpha_block(alpha, img.shape[0]) @ P % p
        return SA.coords(t, P @ SB.basis(t) % p)

    def transfer(self, A: LGroup, B: LGroup, emb, t: int) -> np.ndarray:
        """cor: H^t(A) -> H^t(B) for A <= B (emb: indices of A's elements in B)."""
        p = self.ell
        W, reps = self.transfer_chain(A, B, emb, t)
        SA, SB = self.scoh(A), self.scoh(B)
        r_b, r_a = W.shape[0], W.shape[2]
        C = np.zeros((r_b * SB.dv, r_a * SA.dv), dtype=np.int64)
        for s, rep in enumerate(reps):
            blk = SA.evaluation(W[:, s])
            if self.module is not None:
                tinv = self.module.rho(B.elements[B.inv[rep]][None])[0]
                blk = self._alpha_block(tinv, r_b) @ blk
            C = (C + blk) % p
        return SB.coords(t, C @ SA.basis(t) % p)

    # group level ------------------------------------------------------------------------
    def sylow(self, K: PermGroup) -> LGroup:
        return K.sylow(self.ell)

    def _fixed_coset(self, G: PermGroup, S: LGroup, perms: np.ndarray) -> np.ndarray:
        """x in G with x^{-1} perms x inside S (perms fix the coset x S)."""
        cos = G.cosets(S)
        fixed = np.ones(len(cos), dtype=bool)
        for a in perms:
            fixed &= cos.locate(a[cos.reps]) == np.arange(len(cos))
        hit = np.flatnonzero(fixed)
        if not len(hit):
            raise RelationMismatch("subgroup is not an ell-subgroup of the ambient group")
        return cos.reps[hit[0]]

    def res(self, G: PermGroup, K: PermGroup, t: int) -> np.ndarray:
        """res^G_K on Sylow coordinates: H^t(S_G) -> H^t(S_K)."""
        key = ("res", id(G), id(K), t)
        if key not in self._maps:
            SG, SK = self.sylow(G), self.sylow(K)
            gens = SK.elements[SK.gens] if SK.gens else SK.elements[:0]
            x = self._fixed_coset(G, SG, gens)
            xinv = inverse(x)
            conj = xinv[SK.elements[:, x]]  # x^{-1} a x
            phi = SG.index(conj)
            if np.any(phi < 0):
                raise RelationMismatch("K is not a subgroup of G")
            alpha = None if self.module is None else self.module.rho(x[None])[0]
            self._maps[key] = (self.pullback(SK, SG, phi, alpha, t), G, K)
        return self._maps[key][0]

    def cor(self, K: PermGroup, G: PermGroup, t: int) -> np.ndarray:
        """cor^G_K on Sylow coordinates (valid on stable classes of K)."""
        key = ("cor", id(K), id(G), t)
        if key in self._maps:
            return self._maps[key][0]
        p = self.ell
        SG, SK = self.sylow(G), self.sylow(K)
        total = None
        for g, _ in double_coset_reps(G, SG, K):
            ginv = inverse(g)
            conj = ginv[SG.elements[:, g]]  # g^{-1} s g
            inK = np.flatnonzero(K.contains(conj))
            Lp, idx = SG.subgroup(inK)
            Lgens = ginv[Lp.elements[Lp.gens][:, g]] if Lp.gens else Lp.elements[:0]
            x = self._fixed_coset(K, SK, Lgens)
            h = g[x]
            hinv = inverse(h)
            phi = SK.index(hinv[Lp.elements[:, h]])
            if np.any(phi < 0):
                raise RelationMismatch("double coset bookkeeping failed")
            alpha = None if self.module is None else self.module.rho(h[None])[0]
            term = self.transfer(Lp, SG, idx, t) @ self.pullback(Lp, SK, phi, alpha, t) % p
            total = term if total is None else (total + term) % p
        self._maps[key] = (total, K, G)
        return total

    def sylow_group(self, K: PermGroup) -> PermGroup:
        """S_K as a PermGroup (sharing the LGroup)."""
        key = ("sylgrp", id(K))
        if key not in self._maps:
            SK = self.sylow(K)
            gens = SK.elements[SK.gens] if SK.gens else np.zeros((0, K.degree), dtype=np.int64)
            P = K.subgroup(gens, name=f"S({K.name})")
            P.set_sylow(self.ell, SK)
            self._maps[key] = (P, K)
        return self._maps[key][0]

    def stable(self, K: PermGroup, t: int) -> np.ndarray:
        """Basis (columns, canonical) of H^t(K) inside H^t(S_K)."""
        key = ("stable", id(K), t)
        if key not in self._maps:
            p = self.ell
            h = self.scoh(self.sylow(K)).dim(t)
            if h == 0:
                B = np.zeros((0, 0), dtype=np.int64)
            else:
                M = self.cor(self.sylow_group(K), K, t)
                R, piv = linalg.rref(M.T, p)
                B = R[: len(piv)].T.copy()
            self._maps[key] = (B, K)
        return self._maps[key][0]

    def dim(self, K: PermGroup, t: int) -> int:
        return self.stable(K, t).shape[1]

    def hom_pullback(self, K: PermGroup, Kp: PermGroup, f: Callable, t: int) -> np.ndarray:
        """Pullback along a homomorphism f: K -> Kp on Sylow coordinates (trivial V)."""
        if self.module is not None:
            raise RelationMismatch("pullback across ambients needs trivial coefficients")
        key = ("hom", id(K), id(Kp), id(f), t)
        if key not in self._maps:
            SK, SP = self.sylow(K), self.sylow(Kp)
            img = np.asarray(f(SK.elements))
            gens = img[SK.gens] if SK.gens else img[:0]
            x = self._fixed_coset(Kp, SP, gens)
            xinv = inverse(x)
            phi = SP.index(xinv[img[:, x]])
            if np.any(phi < 0):
                raise RelationMismatch("f does not land in the target group")
            self._maps[key] = (self.pullback(SK, SP, phi, None, t), K, Kp, f)
        return self._maps[key][0]

    # stable-basis coordinates --------------------------------------------------------------
    def coords(self, K: PermGroup, t: int, v: np.ndarray) -> np.ndarray:
        B = self.stable(K, t)
        return linalg.Solver(B, self.ell).solve(v)

    def induced(self, kind: str, t: int, source: PermGroup, target: PermGroup, f: Callable | None = None) -> np.ndarray:
        """Matrix of an induced map in the stable bases of source and target."""
        Bs = self.stable(source, t)
        if kind == "res":
            M = self.res(source, target, t)
        elif kind == "cor":
            M = self.cor(source, target, t)
        elif kind in ("infl", "conj", "hom"):
            if f is None:
                raise RelationMismatch(f"{kind} needs the group homomorphism")
            # pullback along f: target -> source
            M = self.hom_pullback(target, source, f, t)
        else:
            raise ValueError(f"unknown map kind {kind!r}")
        img = M @ Bs % self.ell
        Bt = self.stable(target, t)
        if Bt.shape[1] == 0:
            return np.zeros((0, Bs.shape[1]), dtype=np.int64)
        return linalg.Solver(Bt, self.ell).solve(img)


def double_coset_reps(G: PermGroup, S: LGroup, K: PermGroup):
    """Representatives of S \\ G / K (S an LGroup inside G's ambient)."""
    cos = G.cosets(K)
    gens = S.elements[S.gens] if S.gens else S.elements[:0]
    acts = [cos.action(a) for a in gens]
    seen = np.zeros(len(cos), dtype=bool)
    out = []
    for start in range(len(cos)):
        if seen[start]:
            continue
        seen[start] = True
        size = 1
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for a in acts:
                d = int(a[c])
                if not seen[d]:
                    seen[d] = True
                    size += 1
                    queue.append(d)
        out.append((cos.reps[start], size))
    return out


@dataclass
class CohomologyResult:
    group: str
    ell: int
    t: int
    dim: int
    basis: np.ndarray
    sylow_order: int


def cohomology(G: PermGroup, t: int, ell: int, module: GModule | None = None, engine: Engine | None = None) -> CohomologyResult:
    """H^t(G, V) via stable elements in the cohomology of a Sylow ell-subgroup."""
    eng = engine or Engine(ell, module)
    B = eng.stable(G, t)
    return CohomologyResult(G.name, ell, t, B.shape[1], B, eng.sylow(G).n)


def induced_map(kind: str, t: int, source: PermGroup, target: PermGroup, ell: int,
                f: Callable | None = None, engine: Engine | None = None) -> np.ndarray:
    eng = engine or Engine(ell)
    return eng.induced(kind, t, source, target, f)
