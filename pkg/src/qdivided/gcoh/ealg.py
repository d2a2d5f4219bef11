"""The bigraded algebra E = (+)_{t,n} H^t(G_n; F_ell) and its verification suites.

``G_n`` is GL_n(F_q) or Sym(n).  Classes of ``G_n`` are vectors in the
stable basis of ``H^t(G_n)`` chosen by :class:`~qdivided.gcoh.cohomology.Engine`.
The Sylow subgroup of the block subgroup ``P_{n,m}`` is the block-diagonal
product of the Sylow subgroups of ``G_n`` and ``G_m`` (the unipotent radical
has order prime to ell), with the tensor-product resolution, so the cross
product is a plain tensor of coordinate vectors.
"""
from __future__ import annotations

import numpy as np

from .. import linalg
from ..dmod import Connection, GradedVectorData, NotAConnection, NotFree, connection_kernel_decompose
from ..qarith import QContext, q_binomial
from .cohomology import Engine
from .groups import BudgetExceeded, PermGroup, family, inverse, quotient_action
from .resolution import LGroup

__all__ = [
    "EAlgebra",
    "WindowExceeded",
    "HypothesisViolated",
    "transfer_product",
    "map_d",
    "verify_leibniz",
    "verify_free_D",
    "verify_mid_portion",
    "verify_inflation_transfer",
    "commutativity_report",
    "unit_constants",
    "inftransfer_instance",
    "e_module",
]

GL_NMAX = 3  # GL_4(F_q) is out of reach for explicit enumeration


class WindowExceeded(ValueError):
    pass


class HypothesisViolated(ValueError):
    pass


def _copy(G: PermGroup, name: str | None = None) -> PermGroup:
    H = G.subgroup(G.gens, name=name or G.name)
    for attr in ("family", "n"):
        if hasattr(G, attr):
            setattr(H, attr, getattr(G, attr))
    return H


class EAlgebra:
    """Window ``t <= tmax``, ``n <= nmax`` of E for one family and prime ell."""

    def __init__(self, kind: str, ell: int, tmax: int, nmax: int, q: int | None = None):
        self.fam = family(kind, q)
        self.kind = kind
        self.q = self.fam.q
        if kind == "GL":
            if self.q % ell == 0:
                raise ValueError("ell must not divide q")
            if nmax > GL_NMAX:
                raise WindowExceeded(f"GL_n is only supported for n <= {GL_NMAX}")
        self.ell, self.tmax, self.nmax = ell, tmax, nmax
        self.ctx = QContext(ell, self.q)
        self.engine = Engine(ell)
        self._pgroups: dict = {}
        self._dgroups: dict = {}
        self._dmat: dict = {}
        self._prod: dict = {}

    # window --------------------------------------------------------------------
    def _check(self, t: int, n: int) -> None:
        if not (0 <= t <= self.tmax and 0 <= n <= self.nmax):
            raise WindowExceeded(f"(t={t}, n={n}) outside t <= {self.tmax}, n <= {self.nmax}")

    def group(self, n: int) -> PermGroup:
        return self.fam.group(n)

    def sylow(self, n: int) -> LGroup:
        return self.engine.sylow(self.group(n))

    def dim(self, t: int, n: int) -> int:
        self._check(t, n)
        if n == 0:
            return 1 if t == 0 else 0
        return self.engine.dim(self.group(n), t)

    def basis(self, t: int, n: int) -> np.ndarray:
        """Stable basis of H^t(G_n) in Sylow coordinates (columns)."""
        if n == 0:
            return np.eye(1 if t == 0 else 0, dtype=np.int64)
        return self.engine.stable(self.group(n), t)

    def unit(self, n: int) -> np.ndarray:
        self._check(0, n)
        return np.ones(1, dtype=np.int64)

    def coords(self, t: int, n: int, v: np.ndarray) -> np.ndarray:
        B = self.basis(t, n)
        if B.shape[1] == 0:
            return np.zeros(0, dtype=np.int64)
        return linalg.Solver(B, self.ell).solve(np.asarray(v) % self.ell)

    # structure -------------------------------------------------------------------
    def transfer_group(self, n: int, m: int) -> PermGroup:
        """P_{n,m} with the block-diagonal Sylow subgroup attached."""
        if (n, m) not in self._pgroups:
            P = _copy(self.fam.transfer_subgroup(n, m))
            SA, SB = self.sylow(n), self.sylow(m)
            nB = SB.n
            ia, ib = np.arange(SA.n * nB) // nB, np.arange(SA.n * nB) % nB
            els = self.fam.block_embed(n, m)(SA.elements[ia], SB.elements[ib])
            P.set_sylow(self.ell, LGroup.product(SA, SB, els, P.keys))
            self._pgroups[(n, m)] = P
        return self._pgroups[(n, m)]

    def d_group(self, n: int) -> PermGroup:
        """P_{n-1,1bar} (or Sym(n-1) inside Sym(n)) with Sylow iota(S_{n-1})."""
        if n not in self._dgroups:
            D = _copy(self.fam.d_subgroup(n))
            S = self.sylow(n - 1)
            D.set_sylow(self.ell, S.embedded(self.fam.iota(n)(S.elements), D.keys))
            self._dgroups[n] = D
        return self._dgroups[n]

    def d_matrix(self, t: int, n: int) -> np.ndarray:
        """Matrix of d: E^t_n -> E^t_{n-1} in the stable bases."""
        self._check(t, n)
        if n < 1:
            raise WindowExceeded("d needs n >= 1")
        key = (t, n)
        if key not in self._dmat:
            if n == 1:
                # G_0 is trivial: only H^0 survives
                M = np.ones((1, 1), dtype=np.int64) if t == 0 else np.zeros((0, self.dim(t, 1)), dtype=np.int64)
            else:
                R = self.engine.res(self.group(n), self.d_group(n), t)
                img = R @ self.basis(t, n) % self.ell
                M = self._coords_cols(t, n - 1, img)
            self._dmat[key] = M
        return self._dmat[key]

    def _coords_cols(self, t: int, n: int, V: np.ndarray) -> np.ndarray:
        B = self.basis(t, n)
        if B.shape[1] == 0:
            return np.zeros((0, V.shape[1]), dtype=np.int64)
        return linalg.Solver(B, self.ell).solve(V % self.ell).reshape(B.shape[1], V.shape[1])

    def d(self, x: np.ndarray, t: int, n: int) -> np.ndarray:
        return self.d_matrix(t, n) @ np.asarray(x, dtype=np.int64) % self.ell

    def product_tensor(self, i: int, n: int, j: int, m: int) -> np.ndarray:
        """Structure constants: array (dim E^{i+j}_{n+m}, dim E^i_n, dim E^j_m)."""
        self._check(i + j, n + m)
        key = (i, n, j, m)
        if key in self._prod:
            return self._prod[key]
        p = self.ell
        da, db, dc = self.dim(i, n), self.dim(j, m), self.dim(i + j, n + m)
        out = np.zeros((dc, da, db), dtype=np.int64)
        if n == 0 or m == 0:
            if n == 0 and i == 0:
                out[:, 0, :] = np.eye(db, dtype=np.int64)[:dc]
            elif m == 0 and j == 0:
                out[:, :, 0] = np.eye(da, dtype=np.int64)[:dc]
        elif da and db and dc:
            P = self.transfer_group(n, m)
            SP = self.engine.sylow(P)
            labels = SP.resolution().label(i + j)
            XA, XB = self.basis(i, n), self.basis(j, m)
            a_idx = np.array([a for a, _, _ in labels])
            ii = np.array([x for _, x, _ in labels])
            jj = np.array([y for _, _, y in labels])
            sel = a_idx == i
            cross = np.zeros((len(labels), da, db), dtype=np.int64)
            cross[sel] = XA[ii[sel]][:, :, None] * XB[jj[sel]][:, None, :]
            cross = cross.reshape(len(labels), da * db) % p
            C = self.engine.cor(P, self.group(n + m), i + j) @ cross % p
            out = self._coords_cols(i + j, n + m, C).reshape(dc, da, db)
        self._prod[key] = out
        return out

    def product(self, x, i: int, n: int, y, j: int, m: int) -> np.ndarray:
        T = self.product_tensor(i, n, j, m)
        return np.einsum("cab,a,b->c", T, np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)) % self.ell


def transfer_product(E: EAlgebra, x, i: int, n: int, y, j: int, m: int) -> np.ndarray:
    return E.product(x, i, n, y, j, m)


def map_d(E: EAlgebra, x, t: int, n: int) -> np.ndarray:
    return E.d(x, t, n)


def unit_constants(E: EAlgebra, total: int) -> list[dict]:
    """1_n * 1_m against the q-binomial for n + m <= total."""
    out = []
    for s in range(1, total + 1):
        for n in range(s + 1):
            m = s - n
            got = int(E.product(E.unit(n), 0, n, E.unit(m), 0, m)[0])
            want = q_binomial(s, n, E.ctx)
            out.append({"n": n, "m": m, "value": got, "expected": want, "pass": got == want})
    return out


# ---------------------------------------------------------------------------
# verification suites


def _pairs(E: EAlgebra, tmax: int, nmax: int):
    for s in range(1, nmax + 1):
        for n in range(s + 1):
            m = s - n
            for tt in range(tmax + 1):
                for i in range(tt + 1):
                    yield i, n, tt - i, m


def verify_leibniz(E: EAlgebra, tmax: int | None = None, nmax: int | None = None) -> dict:
    """d(xy) = x d(y) + q^m d(x) y on all basis pairs, and surjectivity of d."""
    tmax = E.tmax if tmax is None else tmax
    nmax = E.nmax if nmax is None else nmax
    p = E.ell
    checked, violations = 0, []
    for i, n, j, m in _pairs(E, tmax, nmax):
        T = E.product_tensor(i, n, j, m)
        lhs = np.einsum("dc,cab->dab", E.d_matrix(i + j, n + m), T) % p
        rhs = np.zeros_like(lhs)
        if m >= 1:
            rhs = rhs + np.einsum("dab,bc->dac", E.product_tensor(i, n, j, m - 1), E.d_matrix(j, m))
        if n >= 1:
            rhs = rhs + E.ctx.qpow(m) * np.einsum("dab,ac->dcb", E.product_tensor(i, n - 1, j, m), E.d_matrix(i, n))
        rhs %= p
        checked += lhs.shape[1] * lhs.shape[2]
        bad = np.argwhere(np.any((lhs - rhs) % p, axis=0))
        for a, b in bad:
            violations.append({"i": i, "n": n, "j": j, "m": m, "x": int(a), "y": int(b)})
    surj = []
    for t in range(tmax + 1):
        for n in range(1, nmax + 1):
            M = E.d_matrix(t, n)
            ok = linalg.rank(M, p) == M.shape[0]
            surj.append({"t": t, "n": n, "rank": linalg.rank(M, p), "target_dim": M.shape[0], "pass": ok})
    passed = not violations and all(s["pass"] for s in surj)
    return {"check": "leibniz", "family": E.kind, "q": E.q, "ell": p, "tmax": tmax, "nmax": nmax,
            "pairs_checked": checked, "violations": violations, "surjectivity": surj, "pass": passed}


def e_module(E: EAlgebra, t: int, nmax: int | None = None) -> tuple[GradedVectorData, Connection]:
    """E^t as a graded right module over the q-divided power algebra with connection d."""
    nmax = E.nmax if nmax is None else nmax
    dims = [E.dim(t, n) for n in range(nmax + 1)]

    def action(n, k):
        return E.product_tensor(t, n, 0, k)[:, :, 0]

    data = GradedVectorData(E.ctx, dims, action)
    return data, Connection(data, lambda n: E.d_matrix(t, n), 1)


def verify_free_D(E: EAlgebra, t: int, nmax: int | None = None) -> dict:
    """Freeness of E^t through its connection, with the generator-degree bound."""
    data, nabla = e_module(E, t, nmax)
    bound = 2 * t if (E.kind == "Sym" or E.q == 2) else t
    report = {"check": "free", "family": E.kind, "q": E.q, "ell": E.ell, "t": t, "nmax": data.N,
              "dims": data.dims, "bound": bound}
    try:
        dec = connection_kernel_decompose(data, nabla)
    except (NotFree, NotAConnection) as exc:
        report.update({"pass": False, "error": str(exc)})
        return report
    support = dec.kernel_support
    report.update({"kernel_dims": dec.kernel_dims, "kernel_support": support,
                   "pass": all(n <= bound for n in support)})
    return report


def commutativity_report(E: EAlgebra, tmax: int | None = None, nmax: int | None = None) -> dict:
    """Compare x*y with (-1)^{ij} y*x and with q^{nm} y*x on all basis pairs."""
    tmax = E.tmax if tmax is None else tmax
    nmax = E.nmax if nmax is None else nmax
    p = E.ell
    graded, braided, total = [], [], 0
    for i, n, j, m in _pairs(E, tmax, nmax):
        A = E.product_tensor(i, n, j, m)
        B = E.product_tensor(j, m, i, n).transpose(0, 2, 1)
        total += A.shape[1] * A.shape[2]
        if np.any((A - (-1) ** (i * j) * B) % p):
            graded.append((i, n, j, m))
        if np.any((A - E.ctx.qpow(n * m) * B) % p):
            braided.append((i, n, j, m))
    return {"check": "commutativity", "pairs_checked": total,
            "graded_failures": graded, "braided_failures": braided}


# ---------------------------------------------------------------------------
# the lemmas behind the derivation property


def _mid_groups(fam, n: int, m: int):
    N = n + m
    return {
        "G": fam.group(N),
        "A": fam.parabolic([n, m]),
        "C": fam.parabolic([N - 1, 1], [False, True]),
        "T1": fam.parabolic([n, m - 1, 1], [False, False, True]),
        "B1": fam.parabolic([n - 1, 1, m], [False, True, False], [(2, 3)]),
        "B2": fam.parabolic([n - 1, m, 1], [False, False, True], [(2, 3)]),
    }


def _swap_perm(fam, n: int, m: int) -> np.ndarray:
    """Coordinate permutation taking block order (n-1, 1, m) to (n-1, m, 1)."""
    N = n + m
    sigma = list(range(n - 1)) + [N - 1] + list(range(n - 1, N - 1))
    return fam.conj_matrix(sigma)


def verify_mid_portion(n: int, m: int, t: int, q: int, ell: int) -> dict:
    """middle = top + bottom for the three paths H^t(P_{n,m}) -> H^t(P_{n+m-1,1bar})."""
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    if n + m > GL_NMAX:
        raise BudgetExceeded(f"n + m > {GL_NMAX}")
    fam = family("GL", q)
    g = _mid_groups(fam, n, m)
    eng = Engine(ell)
    p = ell
    z = _swap_perm(fam, n, m)
    zinv = inverse(z)
    conj = lambda a: zinv[np.asarray(a)[:, z]]  # b -> z^{-1} b z maps B2 onto B1
    rows = []
    ok = True
    for tt in range(t + 1):
        src = eng.stable(g["A"], tt)
        middle = eng.res(g["G"], g["C"], tt) @ eng.cor(g["A"], g["G"], tt) @ src % p
        top = eng.cor(g["T1"], g["C"], tt) @ eng.res(g["A"], g["T1"], tt) @ src % p
        bottom = (eng.cor(g["B2"], g["C"], tt) @ eng.hom_pullback(g["B2"], g["B1"], conj, tt)
                  @ eng.res(g["A"], g["B1"], tt) @ src) % p
        good = not np.any((middle - top - bottom) % p)
        ok &= good
        rows.append({"t": tt, "source_dim": int(src.shape[1]), "pass": bool(good),
                     "top_rank": linalg.rank(top, p), "bottom_rank": linalg.rank(bottom, p)})
    ndc = len(_double_cosets(g["G"], g["C"], g["A"]))
    return {"check": "midportion", "n": n, "m": m, "q": q, "ell": ell, "tmax": t,
            "double_cosets": ndc, "rows": rows, "pass": bool(ok and ndc == 2)}


def _double_cosets(G, H, K):
    from .groups import double_cosets

    return double_cosets(G, H, K)


def _order_in(N: PermGroup, G: PermGroup) -> int:
    return int(np.count_nonzero(G.contains(N.elements)))


def verify_inflation_transfer(G1: PermGroup, G2: PermGroup, N2: PermGroup, G: PermGroup, t: int, ell: int,
                              expected: int | None = None) -> dict:
    """Compare cor^{G2}_{G1} with infl o cor^{G2/N2}_{G1/N1} o infl^{-1}; report the ratio."""
    p = ell
    contains = lambda big, small: bool(np.all(big.contains(small.gens))) if len(small.gens) else True
    if not contains(G, N2):
        raise HypothesisViolated("G must contain N2")
    if not contains(G, G1):
        raise HypothesisViolated("G must contain G1")
    if not contains(G2, G1) or not contains(G2, N2):
        raise HypothesisViolated("G1 and N2 must lie in G2")
    if N2.order % p == 0:
        raise HypothesisViolated("|N2| must be invertible mod ell")
    if len(N2.gens) and not all(np.all(N2.contains(inverse(g)[N2.gens[:, g]])) for g in G2.gens):
        raise HypothesisViolated("N2 must be normal in G2")
    n1 = _order_in(N2, G1)
    if G1.order * N2.order != n1 * G.order:
        raise HypothesisViolated("G1/N1 -> G/N2 is not an isomorphism")
    ratio = N2.order // n1
    eng = Engine(ell)
    Q, proj = quotient_action(G2, N2)
    Q1 = Q.subgroup(proj(G1.gens) if len(G1.gens) else np.zeros((0, Q.degree)), name="G1/N1")
    rows, ok = [], True
    for tt in range(t + 1):
        src = eng.stable(G1, tt)
        top = eng.cor(G1, G2, tt) @ src % p
        infl1 = eng.hom_pullback(G1, Q1, proj, tt) @ eng.stable(Q1, tt) % p
        if src.shape[1]:
            pre = linalg.Solver(infl1, p).solve(src).reshape(-1, src.shape[1])
        else:
            pre = np.zeros((infl1.shape[1], 0), dtype=np.int64)
        mid = eng.cor(Q1, Q, tt) @ eng.stable(Q1, tt) @ pre % p
        bottom = eng.hom_pullback(G2, Q, proj, tt) @ mid % p
        found = _scalar(top, bottom, p)
        good = not np.any((top - ratio * bottom) % p)
        ok &= bool(good)
        rows.append({"t": tt, "dim": int(src.shape[1]), "scalar": found, "pass": bool(good)})
    if expected is not None:
        ok &= ratio % p == expected % p
    return {"check": "inftransfer", "ratio": ratio, "ratio_mod_ell": ratio % p, "rows": rows, "pass": bool(ok)}


def _scalar(top: np.ndarray, bottom: np.ndarray, p: int):
    """c with top = c * bottom (None if no such c)."""
    if not np.any(bottom):
        return 0 if not np.any(top) else None
    k = tuple(np.argwhere(bottom % p)[0])
    c = int(top[k]) * pow(int(bottom[k]), -1, p) % p
    return c if not np.any((top - c * bottom) % p) else None


def inftransfer_instance(n: int, m: int, q: int, ell: int, t: int) -> dict:
    """The instance G1 = P^{(2,3)}_{n-1,m,1bar} inside G2 = P_{n+m-1,1bar}."""
    fam = family("GL", q)
    N = n + m
    G1 = fam.parabolic([n - 1, m, 1], [False, False, True], [(2, 3)])
    G2 = fam.parabolic([N - 1, 1], [False, True])
    N2 = fam.parabolic([N - 1, 1], [True, True])
    G = fam.parabolic([n - 1, m, 1], [False, False, True])
    rep = verify_inflation_transfer(G1, G2, N2, G, t, ell, expected=q**m)
    rep.update({"n": n, "m": m, "q": q, "ell": ell, "expected_ratio": q**m})
    return rep
