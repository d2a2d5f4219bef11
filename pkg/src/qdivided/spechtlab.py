"""Flag permutation modules and unipotent Specht modules of GL_d(F_q).

A flag of type ``mu`` is a chain ``F_q^d = V_0 >= V_1 >= ... >= V_k = 0``
with ``dim V_{i-1}/V_i = mu_i``.  Subspaces are stored as reduced row echelon
bases (tuples of tuples), which makes every flag hashable and gives a
canonical, reproducible ordering of the basis of ``P_mu``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .dmod import bound_unipotent
from .gcoh.fields import gf
from .qarith import QContext, q_multinomial_int

__all__ = [
    "NotAPartition",
    "IndexOutOfRange",
    "NoStablePolynomial",
    "BudgetExceeded",
    "composition",
    "flags",
    "flag_count",
    "psi_map",
    "psi_target",
    "K_set",
    "specht_basis",
    "specht_dim",
    "specht_module",
    "specht_cohomology_series",
    "PolynomialFit",
    "fit_dimension_polynomial",
]

MAX_FLAGS = 20_000


class NotAPartition(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NoStablePolynomial(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def composition(parts: Iterable[int]) -> tuple[int, ...]:
    """Parts as a tuple with trailing zeros removed."""
    mu = [int(p) for p in parts]
    if any(p < 0 for p in mu):
        raise ValueError("parts must be non-negative")
    while mu and mu[-1] == 0:
        mu.pop()
    return tuple(mu)


def _is_partition(mu: Sequence[int]) -> bool:
    return all(mu[i] >= mu[i + 1] for i in range(len(mu) - 1))


# ---------------------------------------------------------------------------
# subspaces over F_q


def _rref(rows: list[list[int]], q: int) -> tuple[tuple[int, ...], ...]:
    F = gf(q)
    m = [list(r) for r in rows]
    out = []
    col = 0
    ncols = len(m[0]) if m else 0
    while m and col < ncols:
        piv = next((i for i, r in enumerate(m) if r[col]), None)
        if piv is None:
            col += 1
            continue
        r = m.pop(piv)
        s = int(F.inv[r[col]])
        r = [int(F.mul[s, x]) for x in r]
        m = [[int(F.add[x, F.neg[F.mul[row[col], y]]]) for x, y in zip(row, r)] for row in m]
        out = [[int(F.add[x, F.neg[F.mul[o[col], y]]]) for x, y in zip(o, r)] for o in out]
        out.append(r)
        col += 1
    return tuple(tuple(r) for r in out if any(r))


def _rref_shapes(k: int, b: int, q: int):
    """All b x k reduced row echelon matrices of rank b over F_q."""
    from itertools import combinations

    for pivots in combinations(range(k), b):
        free = [(i, c) for i in range(b) for c in range(pivots[i] + 1, k) if c not in pivots]
        for vals in product(range(q), repeat=len(free)):
            m = [[0] * k for _ in range(b)]
            for i, pcol in enumerate(pivots):
                m[i][pcol] = 1
            for (i, c), v in zip(free, vals):
                m[i][c] = v
            yield m


def _combine(coeffs: list[list[int]], basis: Sequence[Sequence[int]], q: int) -> list[list[int]]:
    F = gf(q)
    d = len(basis[0]) if basis else 0
    out = []
    for row in coeffs:
        v = [0] * d
        for c, b in zip(row, basis):
            if c:
                v = [int(F.add[x, F.mul[c, y]]) for x, y in zip(v, b)]
        out.append(v)
    return out


def _subspaces_between(low, high, dim: int, q: int, d: int):
    """Subspaces W with low <= W <= high and dim W = dim (canonical forms)."""
    low, high = list(low), list(high)
    if dim < len(low) or dim > len(high):
        return []
    # complete low to a basis of high
    comp = []
    span = [list(r) for r in low]
    for r in high:
        if len(_rref(span + [list(r)], q)) > len(span):
            span.append(list(r))
            comp.append(list(r))
    k, b = len(comp), dim - len(low)
    out = []
    for m in _rref_shapes(k, b, q):
        extra = _combine(m, comp, q)
        out.append(_rref(low + extra, q) if (low or extra) else ())
    return out


def _full(d: int):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


@lru_cache(maxsize=None)
def flags(mu: tuple[int, ...], q: int) -> tuple:
    """All flags of type mu, each a tuple (V_1, ..., V_{k-1}) of canonical subspaces."""
    mu = tuple(mu)
    if flag_count(mu, q) > MAX_FLAGS:
        raise BudgetExceeded(f"{flag_count(mu, q)} flags of type {mu}")
    d = sum(mu)
    dims = [d - sum(mu[: i + 1]) for i in range(len(mu))]
    out = []

    def rec(prev, acc, level):
        if level >= len(mu) - 1:
            out.append(tuple(acc))
            return
        for W in _subspaces_between((), prev, dims[level], q, d):
            rec(W, acc + [W], level + 1)

    rec(_full(d), [], 0)
    return tuple(out)


def flag_count(mu: Sequence[int], q: int) -> int:
    return q_multinomial_int(list(mu), q)


@lru_cache(maxsize=None)
def _flag_index(mu: tuple[int, ...], q: int) -> dict:
    return {f: i for i, f in enumerate(flags(mu, q))}


def psi_target(mu: Sequence[int], r: int, i: int) -> tuple[int, ...]:
    mu = list(mu) + [0, 0]
    k = len(mu) - 2
    new = mu[: r - 1] + [mu[r - 1] + mu[r] - i, i] + mu[r + 1 :]
    return tuple(new[: max(k, r + 1)])


def _check_psi(mu, r, i):
    mu = tuple(mu)
    if not 1 <= r <= len(mu):
        raise IndexOutOfRange(f"r={r} outside 1..{len(mu)}")
    nxt = mu[r] if r < len(mu) else 0
    if not 0 <= i <= mu[r - 1] + nxt:
        raise IndexOutOfRange(f"i={i} outside 0..{mu[r - 1] + nxt}")


def psi_map(mu: Sequence[int], r: int, i: int, q: int, ell: int) -> np.ndarray:
    """Matrix over F_ell of psi_{r,i}: P_mu -> P_{mu^{r,i}} in the flag bases.

    The flag V is sent to the sum of the flags obtained by replacing V_r with
    every W such that V_{r+1} <= W <= V_{r-1} and dim W/V_{r+1} = i.
    """
    mu = tuple(int(x) for x in mu)
    _check_psi(mu, r, i)
    d = sum(mu)
    target = psi_target(mu, r, i)
    src = flags(mu, q)
    tgt = _flag_index(target, q)
    M = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for col, f in enumerate(src):
        chain = (_full(d),) + f + ((),) * (len(target) - len(f))
        low, high = chain[r + 1] if r + 1 < len(chain) else (), chain[r - 1]
        for W in _subspaces_between(low, high, len(low) + i, q, d):
            new = list(chain[1:])
            new[r - 1] = W
            M[tgt[tuple(new[: len(target) - 1])], col] += 1
    return M % ell


def K_set(mu: Sequence[int]) -> list[tuple[int, int]]:
    mu = tuple(mu)
    return [(r, i) for r in range(2, len(mu) + 1) for i in range(mu[r - 1])]


def _psi_stack(mu, q, ell):
    mats = [psi_map(mu, r - 1, i, q, ell) for r, i in K_set(mu)]
    n = flag_count(mu, q)
    return np.vstack(mats) if mats else np.zeros((0, n), dtype=np.int64)


def specht_basis(mu: Sequence[int], q: int, ell: int) -> np.ndarray:
    """Basis (columns) of M_mu inside P_mu."""
    mu = composition(mu)
    if not _is_partition(mu):
        raise NotAPartition(f"{mu} is not weakly decreasing")
    return linalg.nullspace(_psi_stack(mu, q, ell), ell)


def specht_dim(mu: Sequence[int], q: int, ell: int) -> int:
    mu = composition(mu)
    if not _is_partition(mu):
        raise NotAPartition(f"{mu} is not weakly decreasing")
    A = _psi_stack(mu, q, ell)
    return A.shape[1] - linalg.rank(A, ell)


# ---------------------------------------------------------------------------
# GL_d action and cohomology


def _act_on_flag(mat: np.ndarray, f, q: int):
    F = gf(q)
    out = []
    for V in f:
        rows = []
        for v in V:
            w = [0] * len(v)
            for j, c in enumerate(v):
                if c:
                    w = [int(F.add[x, F.mul[c, mat[a, j]]]) for a, x in enumerate(w)]
            rows.append(w)
        out.append(_rref(rows, q) if rows else ())
    return tuple(out)


def flag_permutation(mu: Sequence[int], q: int, mat: np.ndarray) -> np.ndarray:
    """Permutation of the flag basis induced by an invertible matrix."""
    mu = tuple(mu)
    idx = _flag_index(mu, q)
    return np.array([idx[_act_on_flag(mat, f, q)] for f in flags(mu, q)], dtype=np.int64)


def specht_module(mu: Sequence[int], q: int, ell: int):
    """M_mu as a GModule for GL_d(F_q)."""
    from .gcoh.cohomology import GModule
    from .gcoh.groups import family

    mu = composition(mu)
    d = sum(mu)
    fam = family("GL", q)
    G = fam.group(d)
    B = specht_basis(mu, q, ell)
    solver = linalg.Solver(B, ell)
    sp = fam.space(d)
    cache: dict = {}

    def rho(perms):
        mats = sp.perms_to_mats(perms)
        out = np.zeros((len(mats), B.shape[1], B.shape[1]), dtype=np.int64)
        for k, m in enumerate(mats):
            key = m.tobytes()
            if key not in cache:
                perm = flag_permutation(mu, q, m)
                img = np.zeros_like(B)
                img[perm] = B
                cache[key] = solver.solve(img).reshape(B.shape[1], B.shape[1])
            out[k] = cache[key]
        return out

    return GModule(G, B.shape[1], rho, ell)


def specht_cohomology_series(mu: Sequence[int], t: int, n_range: Iterable[int], q: int, ell: int) -> dict:
    """dim H^t(GL_n(F_q), M_{mu[n]}) over n, with skipped n listed."""
    from .gcoh.cohomology import Engine
    from .gcoh.groups import BudgetExceeded as GroupBudget

    mu = composition(mu)
    d = sum(mu)
    values, skipped = [], []
    for n in n_range:
        full = composition((n - d,) + mu) if n >= d else None
        if full is None or not _is_partition(full):
            skipped.append({"n": n, "reason": "mu[n] is not a partition"})
            continue
        if n > 3:
            skipped.append({"n": n, "reason": "GL_n beyond budget"})
            continue
        try:
            module = specht_module(full, q, ell)
            dim = Engine(ell, module).dim(module.group, t) if module.dim else 0
        except (BudgetExceeded, GroupBudget) as exc:
            skipped.append({"n": n, "reason": str(exc)})
            continue
        values.append({"n": n, "dim": int(dim)})
    bound = bound_unipotent(t, d, QContext(ell, q))
    return {"mu": list(mu), "t": t, "q": q, "ell": ell, "values": values, "skipped": skipped,
            "prediction": {"s": bound.s, "period": bound.period, "onset": bound.onset}}


# ---------------------------------------------------------------------------
# dimension polynomials


@dataclass(frozen=True)
class PolynomialFit:
    coefficients: tuple[Fraction, ...]  # in X = q^n, constant term first
    degree: int
    onset: int
    q: int

    def __call__(self, n: int) -> Fraction:
        X = Fraction(self.q) ** n
        return sum((c * X**k for k, c in enumerate(self.coefficients)), Fraction(0))

    def to_json(self) -> dict:
        return {"coefficients": [str(c) for c in self.coefficients], "degree": self.degree,
                "onset": self.onset, "q": self.q}


def _interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients of the interpolating polynomial (Newton form expanded)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
            new[k] -= poly[k] * xs[i]
        new[0] += coef[i]
        poly = new
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def fit_dimension_polynomial(series: Iterable[tuple[int, int]], q: int) -> PolynomialFit:
    """Least-degree polynomial P with dim = P(q^n) on the longest matching tail."""
    pts = sorted((int(n), int(v)) for n, v in series)
    if len({n for n, _ in pts}) != len(pts):
        raise ValueError("repeated n in series")
    for start in range(len(pts) - 1):
        tail = pts[start:]
        xs = [Fraction(q) ** n for n, _ in tail]
        ys = [Fraction(v) for _, v in tail]
        for deg in range(len(tail) - 1):
            poly = _interpolate(xs[: deg + 1], ys[: deg + 1])
            ok = all(sum(c * x**k for k, c in enumerate(poly)) == y for x, y in zip(xs, ys))
            if ok:
                degree = len(poly) - 1 if any(poly) else 0
                return PolynomialFit(tuple(poly), degree, tail[0][0], q)
    raise NoStablePolynomial("no polynomial in q^n matches a tail with a spare point")
