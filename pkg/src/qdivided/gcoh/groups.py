"""Permutation groups and the families used by the cohomology engine.

A group element is a numpy row ``g`` with ``g[i]`` the image of point ``i``;
composition is ``(g*h)[i] = g[h[i]]``.  Elements are identified through
integer keys computed from their images on a base (a set of points whose
pointwise stabiliser is trivial).
"""
from __future__ import annotations

import os
from collections import deque
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .fields import VectorSpace, gf

__all__ = [
    "PermGroup",
    "Cosets",
    "left_cosets",
    "double_cosets",
    "compose",
    "inverse",
    "GLFamily",
    "SymFamily",
    "family",
    "group_from_spec",
    "quotient_action",
    "BudgetExceeded",
    "default_budget",
]


class BudgetExceeded(RuntimeError):
    pass


DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    """Largest group order we enumerate; ``QDIVIDED_BUDGET`` overrides it."""
    return int(os.environ.get("QDIVIDED_BUDGET", DEFAULT_BUDGET))


def compose(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """g*h for single perms or row-aligned batches."""
    if g.ndim == 1:
        return g[h]
    return np.take_along_axis(g, h, axis=-1)


def inverse(g: np.ndarray) -> np.ndarray:
    return np.argsort(g, axis=-1).astype(g.dtype)


def _dtype(degree: int):
    return np.uint8 if degree <= 255 else np.uint16


class PermGroup:
    """Group generated by permutations of ``range(degree)``.

    ``base`` must make element keys injective on this group (a base of any
    overgroup works).  ``max_order`` guards enumeration.
    """

    def __init__(self, gens, degree: int, base=None, name: str = "", max_order: int | None = None):
        self.degree = int(degree)
        dt = _dtype(self.degree)
        gens = np.asarray(gens, dtype=np.int64).reshape(-1, self.degree)
        ident = np.arange(self.degree)
        gens = [g for g in gens if not np.array_equal(g, ident)]
        self.gens = np.array(gens, dtype=dt).reshape(-1, self.degree)
        self.identity = ident.astype(dt)
        self.name = name
        self.max_order = default_budget() if max_order is None else max_order
        self._base = None if base is None else np.asarray(base, dtype=np.int64)
        self._sylow: dict = {}
        self._cosets: dict = {}

    def __repr__(self):
        return f"PermGroup({self.name or 'unnamed'}, degree={self.degree})"

    # keys -----------------------------------------------------------------
    @property
    def base(self) -> np.ndarray:
        if self._base is None:
            self._base = _compute_base(self._enumerate(None), self.degree)
        return self._base

    @cached_property
    def _weights(self) -> np.ndarray:
        nb = len(self.base)
        if self.degree and nb * np.log2(max(self.degree, 2)) > 62:
            raise ValueError("base too long for 64-bit keys")
        return np.array([self.degree**i for i in range(nb)], dtype=np.int64)

    def keys(self, perms: np.ndarray) -> np.ndarray:
        perms = np.asarray(perms)
        return perms[..., self.base].astype(np.int64) @ self._weights

    # elements --------------------------------------------------------------
    def _enumerate(self, base):
        """BFS closure; identity first, then in discovery order."""
        rows = [self.identity[None, :]]
        if base is None:
            seen = {self.identity.tobytes()}
            frontier = self.identity[None, :]
            total = 1
            while len(frontier):
                new = []
                for g in self.gens:
                    for row in g[frontier]:
                        b = row.tobytes()
                        if b not in seen:
                            seen.add(b)
                            new.append(row)
                frontier = np.array(new, dtype=self.identity.dtype).reshape(-1, self.degree)
                rows.append(frontier)
                total += len(frontier)
                if total > self.max_order:
                    raise BudgetExceeded(f"{self.name} has more than {self.max_order} elements")
            return np.concatenate(rows)
        w = np.array([self.degree**i for i in range(len(base))], dtype=np.int64)
        key = lambda x: x[:, base].astype(np.int64) @ w
        known = key(self.identity[None, :])
        frontier = self.identity[None, :]
        total = 1
        while len(frontier):
            cand = np.concatenate([g[frontier] for g in self.gens]) if len(self.gens) else frontier[:0]
            ck = key(cand)
            ck, first = np.unique(ck, return_index=True)
            fresh = ~np.isin(ck, known)
            frontier = cand[first[fresh]]
            if len(frontier):
                order = np.argsort(first[fresh])
                frontier = frontier[order]
                known = np.concatenate([known, ck[fresh]])
                rows.append(frontier)
                total += len(frontier)
                if total > self.max_order:
                    raise BudgetExceeded(f"{self.name} has more than {self.max_order} elements")
        return np.concatenate(rows)

    @cached_property
    def elements(self) -> np.ndarray:
        if self._base is None:
            el = self._enumerate(None)
            self._base = _compute_base(el, self.degree)
            return el
        return self._enumerate(self._base)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _sorted_keys(self):
        k = self.keys(self.elements)
        order = np.argsort(k)
        return k[order], order

    def index(self, perms: np.ndarray) -> np.ndarray:
        """Positions in ``elements`` (-1 when absent)."""
        sk, order = self._sorted_keys
        k = np.atleast_1d(self.keys(perms))
        pos = np.searchsorted(sk, k)
        pos = np.minimum(pos, len(sk) - 1)
        hit = sk[pos] == k
        out = np.where(hit, order[pos], -1)
        return out

    def contains(self, perms: np.ndarray) -> np.ndarray:
        return self.index(perms) >= 0

    def subgroup(self, gens, name: str = "") -> "PermGroup":
        return PermGroup(gens, self.degree, base=self.base, name=name, max_order=self.max_order)

    # Sylow -------------------------------------------------------------------
    def set_sylow(self, ell: int, lgroup) -> None:
        self._sylow[ell] = lgroup

    def sylow(self, ell: int):
        if ell not in self._sylow:
            from .resolution import LGroup

            sub = find_sylow(self, ell)
            self._sylow[ell] = LGroup.from_permgroup(ell, sub)
        return self._sylow[ell]

    def cosets(self, H: "PermGroup", key=None) -> "Cosets":
        k = key if key is not None else id(H)
        if k not in self._cosets:
            self._cosets[k] = left_cosets(self, H)
        return self._cosets[k]


def _compute_base(elements: np.ndarray, degree: int) -> np.ndarray:
    n = len(elements)
    if n == 1 or degree == 0:
        return np.zeros(0, dtype=np.int64)
    chosen: list[int] = []
    prefix = np.zeros(n, dtype=np.int64)
    for pt in range(degree):
        cand = prefix * degree + elements[:, pt].astype(np.int64)
        if len(np.unique(cand)) > len(np.unique(prefix)):
            chosen.append(pt)
            prefix = np.unique(cand, return_inverse=True)[1]
            if len(np.unique(prefix)) == n:
                break
    return np.array(chosen, dtype=np.int64)


def find_sylow(G: PermGroup, ell: int) -> PermGroup:
    """A Sylow ell-subgroup, grown one normaliser step at a time."""
    E = G.elements
    N = len(E)
    target = 1
    while N % (target * ell) == 0:
        target *= ell
    Einv = inverse(E)
    Q = G.subgroup(np.zeros((0, G.degree)), name=f"Syl{ell}({G.name})")
    qgens: list[np.ndarray] = []
    while Q.order < target:
        mask = ~Q.contains(E)
        for a in qgens:
            conj = compose(E, a[Einv])  # x a x^{-1}
            mask &= Q.contains(conj)
        cand = np.flatnonzero(mask)
        X = E[cand]
        P = X.copy()
        for _ in range(ell - 1):
            P = compose(X, P)
        good = cand[Q.contains(P)]
        if not len(good):
            raise ArithmeticError("Sylow growth failed")
        qgens.append(E[good[0]])
        Q = G.subgroup(np.array(qgens), name=f"Syl{ell}({G.name})")
    return Q


# cosets ------------------------------------------------------------------------


class Cosets:
    """Left cosets xH of H in G with canonical integer keys."""

    def __init__(self, G: PermGroup, H: PermGroup, reps: np.ndarray, keys: np.ndarray):
        self.G, self.H = G, H
        self.reps = reps
        self.keys = keys
        self._order = np.argsort(keys)
        self._sorted = keys[self._order]
        self._hb = H.elements[:, G.base]

    def __len__(self):
        return len(self.reps)

    def key_of(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        imgs = X[:, self._hb]  # (c, |H|, nb)
        k = imgs.astype(np.int64) @ self.G._weights
        return k.min(axis=1)

    def locate(self, X: np.ndarray) -> np.ndarray:
        k = self.key_of(X)
        pos = np.searchsorted(self._sorted, k)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if np.any(self._sorted[pos] != k):
            raise KeyError("element outside the coset space")
        return self._order[pos]

    def action(self, g: np.ndarray) -> np.ndarray:
        """Permutation of coset indices induced by left multiplication by g."""
        return self.locate(g[self.reps])


def left_cosets(G: PermGroup, H: PermGroup) -> Cosets:
    hb = H.elements[:, G.base]
    w = G._weights

    def key(X):
        return (X[:, hb].astype(np.int64) @ w).min(axis=1)

    reps = [G.identity[None, :]]
    known = key(G.identity[None, :])
    frontier = G.identity[None, :]
    while len(frontier):
        cand = np.concatenate([g[frontier] for g in G.gens]) if len(G.gens) else frontier[:0]
        if not len(cand):
            break
        ck = key(cand)
        ck, first = np.unique(ck, return_index=True)
        fresh = ~np.isin(ck, known)
        order = np.argsort(first[fresh])
        frontier = cand[first[fresh]][order]
        known = np.concatenate([known, ck[fresh][order]])
        reps.append(frontier)
    reps = np.concatenate(reps)
    return Cosets(G, H, reps, known)


def double_cosets(G: PermGroup, H: PermGroup, K: PermGroup):
    """H \\ G / K as ``[(representative, size), ...]`` via H-orbits on G/K."""
    cos = G.cosets(K)
    n = len(cos)
    acts = [cos.action(h) for h in H.gens]
    seen = np.zeros(n, dtype=bool)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for a in acts:
                d = int(a[c])
                if not seen[d]:
                    seen[d] = True
                    orbit.append(d)
                    queue.append(d)
        out.append((cos.reps[start], len(orbit) * K.order))
    return out


# families ----------------------------------------------------------------------


class GLFamily:
    """GL_n(F_q) acting on the nonzero vectors of F_q^n, plus its parabolics."""

    kind = "GL"

    def __init__(self, q: int):
        self.q = q
        self.field = gf(q)
        self._spaces: dict[int, VectorSpace] = {}
        self._groups: dict = {}

    def space(self, n: int) -> VectorSpace:
        if n not in self._spaces:
            self._spaces[n] = VectorSpace(n, self.q)
        return self._spaces[n]

    def degree(self, n: int) -> int:
        return self.q**n - 1

    def base(self, n: int) -> np.ndarray:
        return self.space(n).basis_points()

    def _gl_gens(self, n: int) -> list[np.ndarray]:
        F = self.field
        gens = []
        if n == 0:
            return gens
        d = np.eye(n, dtype=np.int64)
        d[0, 0] = F.primitive
        gens.append(d)
        if n >= 2:
            t = np.eye(n, dtype=np.int64)
            t[0, 1] = 1
            gens.append(t)
            sw = np.eye(n, dtype=np.int64)[[1, 0] + list(range(2, n))]
            gens.append(sw)
            cyc = np.eye(n, dtype=np.int64)[list(range(1, n)) + [0]]
            gens.append(cyc)
        return gens

    def group(self, n: int) -> PermGroup:
        return self.parabolic([n])

    def parabolic(self, blocks: Sequence[int], barred: Sequence[bool] | None = None,
                  zero_blocks: Sequence[tuple[int, int]] = ()) -> PermGroup:
        """Block upper-triangular group; barred diagonal blocks are the identity,
        listed (i, j) off-diagonal blocks (1-based) vanish."""
        blocks = [int(b) for b in blocks]
        barred = list(barred) if barred is not None else [False] * len(blocks)
        zero = {tuple(z) for z in zero_blocks}
        key = (tuple(blocks), tuple(barred), tuple(sorted(zero)))
        if key in self._groups:
            return self._groups[key]
        N = sum(blocks)
        starts = np.cumsum([0] + blocks)
        mats = []
        for b, (size, bar) in enumerate(zip(blocks, barred)):
            if bar:
                continue
            for g in self._gl_gens(size):
                m = np.eye(N, dtype=np.int64)
                m[starts[b] : starts[b] + size, starts[b] : starts[b] + size] = g
                mats.append(m)
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if (i + 1, j + 1) in zero:
                    continue
                for r in range(starts[i], starts[i + 1]):
                    for c in range(starts[j], starts[j + 1]):
                        for a in self.field.additive_basis():
                            m = np.eye(N, dtype=np.int64)
                            m[r, c] = a
                            mats.append(m)
        sp = self.space(N)
        perms = sp.mats_to_perms(np.array(mats)) if mats else np.zeros((0, sp.npoints), dtype=np.int64)
        name = _parabolic_name("GL", self.q, blocks, barred, zero)
        G = PermGroup(perms, sp.npoints, base=self.base(N), name=name)
        G.family, G.n = self, N
        if zero:
            _check_pattern(self, G, blocks, barred, zero)
        self._groups[key] = G
        return G

    def block_embed(self, n: int, m: int) -> Callable:
        """(g in G_n, h in G_m) -> block-diagonal element of G_{n+m}."""
        sn, sm, snm = self.space(n), self.space(m), self.space(n + m)

        def embed(gs: np.ndarray, hs: np.ndarray) -> np.ndarray:
            a = sn.perms_to_mats(gs) if n else np.zeros((len(hs), 0, 0), dtype=np.int64)
            b = sm.perms_to_mats(hs) if m else np.zeros((len(gs), 0, 0), dtype=np.int64)
            k = max(len(a), len(b))
            out = np.zeros((k, n + m, n + m), dtype=np.int64)
            out[:, :n, :n] = a
            out[:, n:, n:] = b
            return snm.mats_to_perms(out).astype(_dtype(snm.npoints))

        return embed

    def iota(self, n: int) -> Callable:
        """G_{n-1} -> P_{n-1, 1bar} in G_n."""
        one = np.zeros((1, self.degree(1)), dtype=np.int64)
        emb = self.block_embed(n - 1, 1)
        return lambda gs: emb(gs, np.repeat(one, len(gs), axis=0))

    def d_subgroup(self, n: int) -> PermGroup:
        return self.parabolic([n - 1, 1], [False, True])

    def transfer_subgroup(self, n: int, m: int) -> PermGroup:
        return self.parabolic([n, m])

    def conj_matrix(self, perm_of_coords: Sequence[int]) -> np.ndarray:
        N = len(perm_of_coords)
        m = np.zeros((N, N), dtype=np.int64)
        for i, j in enumerate(perm_of_coords):
            m[j, i] = 1
        return self.space(N).mats_to_perms(m[None])[0].astype(_dtype(self.degree(N)))

    def radical_order(self, blocks, barred=None) -> int:
        return self.q ** sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i + 1, len(blocks)))


def _parabolic_name(kind, q, blocks, barred, zero):
    parts = [f"{b}bar" if bar else str(b) for b, bar in zip(blocks, barred)]
    s = f"{kind}{sum(blocks)}(F{q})" if len(blocks) == 1 and not any(barred) else f"P_{{{','.join(parts)}}}(F{q})"
    if zero:
        s += "^" + "".join(f"({i},{j})" for i, j in sorted(zero))
    return s


def _check_pattern(fam: GLFamily, G: PermGroup, blocks, barred, zero) -> None:
    mats = fam.space(sum(blocks)).perms_to_mats(G.elements)
    starts = np.cumsum([0] + list(blocks))
    for i, j in zero:
        blk = mats[:, starts[i - 1] : starts[i], starts[j - 1] : starts[j]]
        if np.any(blk):
            raise ValueError("zero-block pattern is not closed under multiplication")


class SymFamily:
    """Symmetric groups Sym(n) on n points; Young subgroups play the parabolics."""

    kind = "Sym"
    q = 1

    def __init__(self):
        self._groups: dict = {}

    def degree(self, n: int) -> int:
        return n

    def base(self, n: int) -> np.ndarray:
        return np.arange(max(n - 1, 0), dtype=np.int64)

    def group(self, n: int) -> PermGroup:
        return self.young([n])

    def young(self, blocks: Sequence[int]) -> PermGroup:
        key = tuple(int(b) for b in blocks)
        if key in self._groups:
            return self._groups[key]
        N = sum(key)
        gens = []
        start = 0
        for b in key:
            if b >= 2:
                sw = np.arange(N)
                sw[[start, start + 1]] = sw[[start + 1, start]]
                gens.append(sw)
                cyc = np.arange(N)
                cyc[start : start + b] = np.roll(cyc[start : start + b], -1)
                gens.append(cyc)
            start += b
        name = f"Sym{N}" if len(key) == 1 else f"Sym{list(key)}"
        G = PermGroup(np.array(gens).reshape(-1, N), N, base=self.base(N), name=name)
        G.family, G.n = self, N
        self._groups[key] = G
        return G

    parabolic = lambda self, blocks, barred=None, zero_blocks=(): self.young(blocks)

    def block_embed(self, n: int, m: int) -> Callable:
        def embed(gs, hs):
            gs = np.asarray(gs).reshape(-1, n)
            hs = np.asarray(hs).reshape(-1, m)
            k = max(len(gs), len(hs))
            gs = np.broadcast_to(gs, (k, n))
            hs = np.broadcast_to(hs, (k, m))
            return np.concatenate([gs, hs + n], axis=1).astype(_dtype(n + m))

        return embed

    def iota(self, n: int) -> Callable:
        emb = self.block_embed(n - 1, 1)
        return lambda gs: emb(gs, np.zeros((len(gs), 1), dtype=np.int64))

    def d_subgroup(self, n: int) -> PermGroup:
        return self.young([n - 1, 1])

    def transfer_subgroup(self, n: int, m: int) -> PermGroup:
        return self.young([n, m])


_FAMILIES: dict = {}


def family(kind: str, q: int | None = None):
    key = (kind, q if kind == "GL" else None)
    if key not in _FAMILIES:
        _FAMILIES[key] = GLFamily(int(q)) if kind == "GL" else SymFamily()
    return _FAMILIES[key]


def group_from_spec(spec: dict) -> PermGroup:
    """Build a group from the JSON group description."""
    fam = spec.get("family")
    if fam == "GL":
        return family("GL", int(spec["q"])).group(int(spec["n"]))
    if fam == "Sym":
        return family("Sym").group(int(spec["n"]))
    if fam == "Parabolic":
        blocks = [int(b) for b in spec["blocks"]]
        barred = spec.get("barred") or [False] * len(blocks)
        zero = [tuple(z) for z in spec.get("zero_blocks", [])]
        return family("GL", int(spec["q"])).parabolic(blocks, barred, zero)
    if fam == "Table":
        mul = np.asarray(spec["mul"], dtype=np.int64)
        n = len(mul)
        ident = [i for i in range(n) if np.array_equal(mul[i], np.arange(n))]
        if len(ident) != 1 or not np.array_equal(mul[:, ident[0]], np.arange(n)):
            raise ValueError("table has no two-sided identity")
        if any(sorted(row) != list(range(n)) for row in mul.tolist()):
            raise ValueError("table rows are not permutations")
        if not _associative(mul):
            raise ValueError("table is not associative")
        # left regular representation: g -> (x -> g x)
        G = PermGroup(mul, n, name="Table")
        if G.order != n:
            raise ValueError("table does not define a group")
        return G
    raise ValueError(f"unknown group family {fam!r}")


def _associative(mul: np.ndarray) -> bool:
    n = len(mul)
    a = np.arange(n)
    left = mul[mul[a[:, None, None], a[None, :, None]], a[None, None, :]]
    right = mul[a[:, None, None], mul[a[None, :, None], a[None, None, :]]]
    return bool(np.array_equal(left, right))


def quotient_action(G: PermGroup, N: PermGroup) -> tuple[PermGroup, Callable]:
    """The quotient G/N (N normal) acting on G/N, with the projection map."""
    cos = left_cosets(G, N)
    imgs = np.array([cos.action(g) for g in G.gens]).reshape(-1, len(cos))
    Q = PermGroup(imgs, len(cos), name=f"{G.name}/{N.name}")

    def proj(perms: np.ndarray) -> np.ndarray:
        perms = np.atleast_2d(perms)
        return np.array([cos.action(g) for g in perms]).astype(_dtype(len(cos)))

    return Q, proj
