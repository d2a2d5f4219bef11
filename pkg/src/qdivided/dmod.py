"""Graded modules over the q-divided power algebra.

Two carriers are supported: :class:`FPModule` (generators and homogeneous
relations) and :class:`GradedVectorData` (per-degree dimensions together with
the right action of every basis element ``x^[k]``).  Presentations are
converted to graded data up to a truncation degree and all invariants are
computed there, so the answers are certificates valid up to that degree.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .dalg import DElement
from .qarith import QContext, b_value, fl, q_binomial

__all__ = [
    "TruncationTooSmall",
    "NotAConnection",
    "NotFree",
    "generator_vectors",
    "IndexOutOfWindow",
    "FPModule",
    "free_module",
    "GradedVectorData",
    "Connection",
    "PeriodicityCertificate",
    "EpsilonLambda",
    "KernelDecomposition",
    "as_graded",
    "hilbert",
    "generator_counts",
    "g_r",
    "epsilon_lambda",
    "predict_period",
    "free_connection",
    "check_connection_law",
    "connection_kernel_decompose",
    "phi_map",
    "bar_projection",
    "iterated_connection_check",
    "power_connection",
    "graded_submodule",
    "graded_quotient",
    "direct_sum",
    "bound_homology_epsilon",
    "bound_spectral_epsilon",
    "bound_spectral_convergence",
    "bound_vimod",
    "bound_unipotent",
]


class TruncationTooSmall(ValueError):
    pass


class NotAConnection(ValueError):
    pass


class NotFree(ValueError):
    pass


class IndexOutOfWindow(KeyError):
    pass


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class FPModule:
    """Right module with generators in ``gen_degrees`` and relation rows.

    A relation is a mapping ``column -> DElement``; it represents
    ``sum_j e_j * a_j`` and must be homogeneous.
    """

    ctx: QContext
    gen_degrees: tuple[int, ...]
    relations: tuple[tuple[tuple[int, DElement], ...], ...] = ()

    def __init__(self, ctx, gen_degrees, relations=()):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "gen_degrees", tuple(int(d) for d in gen_degrees))
        rows = []
        for rel in relations:
            items = rel.items() if isinstance(rel, Mapping) else rel
            row = tuple(sorted((int(j), a) for j, a in items if a))
            rows.append(row)
        object.__setattr__(self, "relations", tuple(rows))
        for row in self.relations:
            self.relation_degree(row)

    def relation_degree(self, row) -> int | None:
        deg = None
        for j, a in row:
            if a.ctx != self.ctx:
                raise ValueError("relation entry over a different context")
            if not 0 <= j < len(self.gen_degrees):
                raise ValueError(f"relation refers to missing generator {j}")
            for n in a.degrees():
                d = n + self.gen_degrees[j]
                if deg is None:
                    deg = d
                elif d != deg:
                    raise ValueError("relation row is not homogeneous")
        return deg

    def slice(self, n: int) -> tuple[list[int], np.ndarray]:
        """Free generators alive in degree n and the relation span there."""
        ctx = self.ctx
        cols = [j for j, d in enumerate(self.gen_degrees) if d <= n]
        pos = {j: i for i, j in enumerate(cols)}
        vecs = []
        for row in self.relations:
            rd = self.relation_degree(row)
            if rd is None or rd > n:
                continue
            k = n - rd
            v = np.zeros(len(cols), dtype=np.int64)
            for j, a in row:
                for e, c in a.terms.items():
                    v[pos[j]] += c * q_binomial(e + k, e, ctx)
            vecs.append(v % ctx.ell)
        rel = np.array(vecs, dtype=np.int64).T if vecs else np.zeros((len(cols), 0), dtype=np.int64)
        return cols, rel

    def to_json(self) -> dict:
        return {
            "ell": self.ctx.ell,
            "q": self.ctx.q_int,
            "generators": [{"degree": d} for d in self.gen_degrees],
            "relations": [
                [{"col": j, "element": a.to_json()} for j, a in row] for row in self.relations
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FPModule":
        ctx = QContext(int(data["ell"]), int(data["q"]))
        gens = [int(g["degree"]) for g in data["generators"]]
        rels = []
        for row in data.get("relations", []):
            rels.append({int(e["col"]): DElement(ctx, e["element"]) for e in row})
        return cls(ctx, gens, rels)


def free_module(ctx: QContext, degrees: Iterable[int]) -> FPModule:
    return FPModule(ctx, list(degrees))


# ---------------------------------------------------------------------------
# graded data


class GradedVectorData:
    """Truncated graded module: ``dims[n]`` for n <= N plus right actions.

    ``action(n, k)`` returns the ``dims[n+k] x dims[n]`` matrix of
    multiplication by ``x^[k]``; results are cached.
    """

    def __init__(self, ctx: QContext, dims: Sequence[int], action: Callable[[int, int], np.ndarray]):
        self.ctx = ctx
        self.dims = [int(d) for d in dims]
        self.N = len(self.dims) - 1
        self._action = action
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def act(self, n: int, k: int) -> np.ndarray:
        if n < 0 or k < 0 or n + k > self.N:
            raise IndexError(f"action ({n}, {k}) outside truncation {self.N}")
        key = (n, k)
        if key not in self._cache:
            a = np.asarray(self._action(n, k), dtype=np.int64) % self.ctx.ell
            a = a.reshape(self.dims[n + k], self.dims[n])
            self._cache[key] = a
        return self._cache[key]

    def truncate(self, N: int) -> "GradedVectorData":
        return GradedVectorData(self.ctx, self.dims[: N + 1], self.act)

    def is_zero(self) -> bool:
        return not any(self.dims)


def _presentation_data(M: FPModule, N: int) -> GradedVectorData:
    ctx, ell = M.ctx, M.ctx.ell
    slices = []
    for n in range(N + 1):
        cols, rel = M.slice(n)
        dim_free = len(cols)
        comp = linalg.complement_basis(rel, dim_free, ell)
        # coordinates of a free vector: solve [comp | rel] y = v and keep the comp part
        solver = linalg.Solver(np.hstack([comp, rel]), ell)
        slices.append((cols, comp, solver))

    def action(n, k):
        cols_n, comp_n, _ = slices[n]
        cols_m, comp_m, solver_m = slices[n + k]
        pos = {j: i for i, j in enumerate(cols_m)}
        img = np.zeros((len(cols_m), comp_n.shape[1]), dtype=np.int64)
        for i, j in enumerate(cols_n):
            e = n - M.gen_degrees[j]
            img[pos[j]] = comp_n[i] * q_binomial(e + k, e, ctx)
        y = solver_m.solve(img % ell)
        return y[: comp_m.shape[1]]

    dims = [s[1].shape[1] for s in slices]
    return GradedVectorData(ctx, dims, action)


def generator_vectors(M: FPModule, N: int) -> list[tuple[int, np.ndarray]]:
    """Images of the free generators in the coordinates used by ``as_graded(M, N)``."""
    ell = M.ctx.ell
    out = []
    for j, d in enumerate(M.gen_degrees):
        if d > N:
            continue
        cols, rel = M.slice(d)
        comp = linalg.complement_basis(rel, len(cols), ell)
        solver = linalg.Solver(np.hstack([comp, rel]), ell)
        v = np.zeros((len(cols), 1), dtype=np.int64)
        v[cols.index(j), 0] = 1
        out.append((d, solver.solve(v)[: comp.shape[1], 0]))
    return out


def as_graded(M, N: int) -> GradedVectorData:
    if isinstance(M, GradedVectorData):
        if M.N < N:
            raise TruncationTooSmall(f"data only known up to degree {M.N}")
        return M.truncate(N)
    return _presentation_data(M, N)


def hilbert(M, N: int) -> list[int]:
    if isinstance(M, FPModule):
        ell = M.ctx.ell
        out = []
        for n in range(N + 1):
            cols, rel = M.slice(n)
            out.append(len(cols) - linalg.rank(rel, ell))
        return out
    return as_graded(M, N).dims


# ---------------------------------------------------------------------------
# generation over D_{>=r} and the invariants epsilon, lambda


def _decomposables(data: GradedVectorData, n: int, r: int) -> np.ndarray:
    step = b_value(r, data.ctx)
    blocks = [data.act(n - k, k) for k in range(step, n + 1, step)]
    blocks = [b for b in blocks if b.size]
    if not blocks:
        return np.zeros((data.dims[n], 0), dtype=np.int64)
    return np.hstack(blocks)


def generator_counts(M, r: int, N: int) -> list[int]:
    """Number of minimal D_{>=r}-generators in each degree <= N."""
    data = as_graded(M, N)
    ell = data.ctx.ell
    return [data.dims[n] - linalg.rank(_decomposables(data, n, r), ell) for n in range(N + 1)]


def g_r(M, r: int, N: int) -> int | None:
    """Top degree of a minimal D_{>=r}-generator (None for the zero module)."""
    counts = generator_counts(M, r, N)
    if counts[N]:
        raise TruncationTooSmall(f"generators still appear in degree {N}")
    top = [n for n, c in enumerate(counts) if c]
    return top[-1] if top else None


def _generator_lifts(data: GradedVectorData, n: int, r: int) -> np.ndarray:
    dec = _decomposables(data, n, r)
    return linalg.complement_basis(dec, data.dims[n], data.ctx.ell)


def _free_witness(data: GradedVectorData, r: int) -> tuple[bool, list[int]]:
    """Do generator lifts times D_{>=r}-monomials form a basis in every degree?"""
    ctx, ell = data.ctx, data.ctx.ell
    step = b_value(r, ctx)
    lifts = [_generator_lifts(data, n, r) for n in range(data.N + 1)]
    counts = [l.shape[1] for l in lifts]
    for n in range(data.N + 1):
        cols = [lifts[n]]
        for k in range(step, n + 1, step):
            cols.append(data.act(n - k, k) @ lifts[n - k] % ell)
        mat = np.hstack(cols) if cols else np.zeros((data.dims[n], 0), dtype=np.int64)
        if mat.shape[1] != data.dims[n] or linalg.rank(mat, ell) != data.dims[n]:
            return False, counts
    return True, counts


@dataclass(frozen=True)
class EpsilonLambda:
    epsilon: int
    lam: int | None
    certified_to: int
    generators: tuple[int, ...] = ()

    def __iter__(self):
        return iter((self.epsilon, self.lam, self.certified_to))


def epsilon_lambda(M, N: int) -> EpsilonLambda:
    """Smallest r with M free over D_{>=r} up to degree N, and lambda there.

    The zero module gets ``epsilon = 0`` and ``lam = None``.
    """
    data = as_graded(M, N)
    ctx = data.ctx
    if data.is_zero():
        return EpsilonLambda(0, None, N)
    r = 0
    while b_value(r, ctx) <= N:
        ok, counts = _free_witness(data, r)
        if ok:
            top = max(n for n, c in enumerate(counts) if c)
            if top + b_value(r, ctx) <= N:
                return EpsilonLambda(r, top + 1 - b_value(r, ctx), N, tuple(counts))
        r += 1
    raise TruncationTooSmall(f"no freeness certificate below degree {N}")


@dataclass(frozen=True)
class PeriodicityCertificate:
    epsilon_bound: int
    lambda_bound: int | None
    period: int
    onset: int
    truncation: int
    dims: tuple[int, ...] = ()
    violations: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def predict_period(M, N: int) -> PeriodicityCertificate:
    data = as_graded(M, N)
    inv = epsilon_lambda(data, N)
    period = b_value(inv.epsilon, data.ctx)
    onset = max(inv.lam, 0) if inv.lam is not None else 0
    dims = data.dims
    bad = []
    for n in range(onset, N + 1):
        m = n + period
        if m <= N and dims[n] != dims[m]:
            bad.append((n, m))
    return PeriodicityCertificate(
        inv.epsilon, inv.lam, period, inv.lam if inv.lam is not None else 0, N, tuple(dims), tuple(bad)
    )


# ---------------------------------------------------------------------------
# connections


@dataclass
class Connection:
    """Degree-wise maps ``M_n -> M_{n-step}`` (``maps(n)`` is dims[n-step] x dims[n])."""

    data: GradedVectorData
    maps: Callable[[int], np.ndarray]
    step: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, n: int) -> np.ndarray:
        if n not in self._cache:
            dims = self.data.dims
            if n < self.step:
                self._cache[n] = np.zeros((0, dims[n]), dtype=np.int64)
            else:
                m = np.asarray(self.maps(n), dtype=np.int64) % self.data.ctx.ell
                self._cache[n] = m.reshape(dims[n - self.step], dims[n])
        return self._cache[n]

    def power(self, n: int, j: int) -> np.ndarray:
        """Matrix of nabla^j on M_n."""
        ell = self.data.ctx.ell
        out = np.eye(self.data.dims[n], dtype=np.int64)
        deg = n
        for _ in range(j):
            if deg < self.step:
                return np.zeros((0, self.data.dims[n]), dtype=np.int64)
            out = self.at(deg) @ out % ell
            deg -= self.step
        return out


def free_connection(data: GradedVectorData, M: FPModule) -> Connection:
    """Componentwise d on a free module (no relations) given in graded form."""
    if M.relations:
        raise ValueError("componentwise d is only defined here for free modules")
    degs = M.gen_degrees

    def maps(n):
        src = [j for j, d in enumerate(degs) if d <= n]
        dst = [j for j, d in enumerate(degs) if d <= n - 1]
        pos = {j: i for i, j in enumerate(dst)}
        m = np.zeros((len(dst), len(src)), dtype=np.int64)
        for i, j in enumerate(src):
            if j in pos:
                m[pos[j], i] = 1
        return m

    return Connection(data, maps, 1)


def power_connection(nabla: Connection, times: int) -> Connection:
    """``nabla^times`` viewed as a map of step ``times * step``."""
    return Connection(nabla.data, lambda n: nabla.power(n, times), nabla.step * times)


def check_connection_law(nabla: Connection) -> list[tuple[int, int]]:
    """Degree pairs (n, k) where nabla(m x^[k]) != m d^s(x^[k]) + q^{s k} nabla(m) x^[k]."""
    data, s = nabla.data, nabla.step
    ctx, ell = data.ctx, data.ctx.ell
    bad = []
    for n in range(data.N + 1):
        for k in range(0, data.N - n + 1):
            lhs = nabla.at(n + k) @ data.act(n, k) % ell if n + k >= s else None
            if lhs is None:
                continue
            rhs = np.zeros_like(lhs)
            if k >= s:
                rhs = rhs + data.act(n, k - s)
            if n >= s:
                rhs = rhs + ctx.qpow(s * k) * (data.act(n - s, k) @ nabla.at(n))
            if np.any((lhs - rhs) % ell):
                bad.append((n, k))
    return bad


def bar_projection(data: GradedVectorData, n: int) -> np.ndarray:
    """Matrix of M_n -> M_n / (D_+ M)_n in a chosen complement basis."""
    ell = data.ctx.ell
    dec = _decomposables(data, n, 0)
    comp = linalg.complement_basis(dec, data.dims[n], ell)
    y = linalg.Solver(np.hstack([comp, dec]), ell).solve(np.eye(data.dims[n], dtype=np.int64))
    return y[: comp.shape[1]]


def phi_map(nabla: Connection, n: int) -> list[np.ndarray]:
    """Blocks of Phi on M_n: block j maps M_n to Mbar_{n-j} (tensor x^[j])."""
    data, ell = nabla.data, nabla.data.ctx.ell
    return [bar_projection(data, n - j) @ nabla.power(n, j) % ell for j in range(n + 1)]


@dataclass
class KernelDecomposition:
    kernel: list[np.ndarray]
    kernel_dims: list[int]
    iso_degrees: list[int]
    surjective_degrees: list[int]
    phi_iso_degrees: list[int]
    kernel_bar_iso_degrees: list[int]
    truncation: int

    @property
    def kernel_support(self) -> list[int]:
        return [n for n, d in enumerate(self.kernel_dims) if d]

    @property
    def ok(self) -> bool:
        return True


def connection_kernel_decompose(data: GradedVectorData, nabla: Connection) -> KernelDecomposition:
    """Kernel of nabla and the checks that ker(nabla) (x) D -> M is an isomorphism.

    For ``step = b_r`` the multiplication map uses only x^[k] with b_r | k,
    i.e. it tests freeness over D_{>=r}.
    """
    ell, s = data.ctx.ell, nabla.step
    bad = check_connection_law(nabla)
    if bad:
        raise NotAConnection(f"connection law fails at (deg m, deg a) = {bad[0]}")
    kernel = [linalg.nullspace(nabla.at(n), ell) if n >= s else np.eye(data.dims[n], dtype=np.int64)
              for n in range(data.N + 1)]
    iso, surj, phi_ok, kbar = [], [], [], []
    for n in range(data.N + 1):
        cols = [data.act(n - k, k) @ kernel[n - k] % ell for k in range(0, n + 1, s)]
        mat = np.hstack(cols)
        if mat.shape[1] != data.dims[n] or linalg.rank(mat, ell) != data.dims[n]:
            raise NotFree(f"ker(nabla) (x) D -> M fails to be bijective in degree {n}")
        iso.append(n)
        if n >= s:
            if linalg.rank(nabla.at(n), ell) != data.dims[n - s]:
                raise NotFree(f"nabla is not surjective in degree {n}")
            surj.append(n)
        if s == 1:
            phi = np.vstack(phi_map(nabla, n))
            if phi.shape[0] != data.dims[n] or linalg.rank(phi, ell) != data.dims[n]:
                raise NotFree(f"Phi fails to be bijective in degree {n}")
            phi_ok.append(n)
            proj = bar_projection(data, n) @ kernel[n] % ell
            if proj.shape[0] != proj.shape[1] or linalg.rank(proj, ell) != proj.shape[0]:
                raise NotFree(f"ker(nabla) -> Mbar fails to be bijective in degree {n}")
            kbar.append(n)
    return KernelDecomposition(kernel, [k.shape[1] for k in kernel], iso, surj, phi_ok, kbar, data.N)


def iterated_connection_check(data: GradedVectorData, nabla: Connection, n: int,
                              samples: int = 50, rng: random.Random | None = None) -> dict:
    """Sampled check of nabla^n(m a) = sum_i q^{(n-i)(deg a - i)} [n, i]_q nabla^{n-i}(m) d^i(a)."""
    rng = rng or random.Random(0)
    ctx, ell, N = data.ctx, data.ctx.ell, data.N
    failures = []
    checked = 0
    for _ in range(samples):
        deg_m = rng.randrange(N + 1)
        if data.dims[deg_m] == 0:
            continue
        k = rng.randrange(N - deg_m + 1)
        if deg_m + k < n:
            continue
        m = np.array([rng.randrange(ell) for _ in range(data.dims[deg_m])], dtype=np.int64)
        c = rng.randrange(1, ell)
        lhs = nabla.power(deg_m + k, n) @ (c * data.act(deg_m, k) @ m) % ell
        rhs = np.zeros_like(lhs)
        for i in range(n + 1):
            if i > k or n - i > deg_m:
                continue
            coef = ctx.qpow((n - i) * (k - i)) * q_binomial(n, i, ctx) * c
            rhs = rhs + coef * (data.act(deg_m - (n - i), k - i) @ (nabla.power(deg_m, n - i) @ m))
        checked += 1
        if np.any((lhs - rhs) % ell):
            failures.append({"deg_m": deg_m, "deg_a": k, "m": m.tolist(), "coeff": c})
    return {"n": n, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# sub- and quotient data, sums


def graded_submodule(data: GradedVectorData, gens: Iterable[tuple[int, Sequence[int]]]) -> tuple[GradedVectorData, list[np.ndarray]]:
    """Submodule generated by ``(degree, vector)`` pairs; returns data and inclusion bases."""
    ctx, ell = data.ctx, data.ctx.ell
    gens = [(d, np.asarray(v, dtype=np.int64) % ell) for d, v in gens]
    bases = []
    for n in range(data.N + 1):
        cols = [data.act(d, n - d) @ v % ell for d, v in gens if d <= n]
        mat = np.array(cols, dtype=np.int64).T if cols else np.zeros((data.dims[n], 0), dtype=np.int64)
        piv = linalg.independent_columns(mat, ell)
        bases.append(mat[:, piv] if piv else np.zeros((data.dims[n], 0), dtype=np.int64))
    solvers = [linalg.Solver(b, ell) for b in bases]

    def action(n, k):
        return solvers[n + k].solve(data.act(n, k) @ bases[n] % ell)

    return GradedVectorData(ctx, [b.shape[1] for b in bases], action), bases


def graded_quotient(data: GradedVectorData, sub_bases: Sequence[np.ndarray]) -> GradedVectorData:
    ctx, ell = data.ctx, data.ctx.ell
    comps, solvers = [], []
    for n in range(data.N + 1):
        comp = linalg.complement_basis(sub_bases[n], data.dims[n], ell)
        comps.append(comp)
        solvers.append(linalg.Solver(np.hstack([comp, sub_bases[n]]), ell))

    def action(n, k):
        y = solvers[n + k].solve(data.act(n, k) @ comps[n] % ell)
        return y[: comps[n + k].shape[1]]

    return GradedVectorData(ctx, [c.shape[1] for c in comps], action)


def direct_sum(*parts: GradedVectorData) -> GradedVectorData:
    ctx = parts[0].ctx
    N = min(p.N for p in parts)
    dims = [sum(p.dims[n] for p in parts) for n in range(N + 1)]

    def action(n, k):
        out = np.zeros((dims[n + k], dims[n]), dtype=np.int64)
        r = c = 0
        for p in parts:
            a = p.act(n, k)
            out[r : r + a.shape[0], c : c + a.shape[1]] = a
            r += a.shape[0]
            c += a.shape[1]
        return out

    return GradedVectorData(ctx, dims, action)


# ---------------------------------------------------------------------------
# bound calculators


def bound_homology_epsilon(eps1: int, eps2: int, eps3: int, lam1: int, lam2: int, ctx: QContext) -> int:
    return max(eps1, eps2, eps3, fl(lam1, ctx), fl(lam2, ctx)) + 1


def _window(data: Mapping[int, int], lo: int, hi: int, strict: bool) -> list[int]:
    out = []
    for t in range(lo, hi + 1):
        if t in data:
            out.append(data[t])
        elif strict:
            raise IndexOutOfWindow(t)
    return out


def bound_spectral_epsilon(t: int, eps1_by_t: Mapping[int, int], fl_by_t: Mapping[int, int],
                           k: int, strict: bool = False) -> int:
    """Bound on epsilon of the page-(1+k) terms in total degree t.

    ``max(eps_1^{t-k..t+k}, fl^{t-k..t+k-1}) + k``; indices missing from the
    supplied windows count as absent unless ``strict``.
    """
    vals = _window(eps1_by_t, t - k, t + k, strict) + _window(fl_by_t, t - k, t + k - 1, strict)
    return (max(vals) if vals else 0) + k


def bound_spectral_convergence(r: int, t: int, eps1_by_t: Mapping[int, int],
                               fl_by_t: Mapping[int, int], strict: bool = False) -> int:
    """Bound on epsilon(H^t) for a sequence supported in columns -r..r (page 2r+2)."""
    return bound_spectral_epsilon(t, eps1_by_t, fl_by_t, 2 * r + 1, strict)


@dataclass(frozen=True)
class VIBounds:
    lambda_bound: int
    epsilon_bound: int
    onset: int
    period: int

    def __iter__(self):
        return iter((self.lambda_bound, self.epsilon_bound, self.onset, self.period))


def bound_vimod(t: int, t0: int, t1: int, delta: int, ctx: QContext) -> VIBounds:
    if ctx.q_int == 2:
        lam = 2 * t + delta
        eps = fl(2 * t + 7 * delta, ctx) + 2 * delta + 1
    else:
        lam = t + delta
        eps = fl(t + 4 * delta, ctx) + 2 * delta + 1
    return VIBounds(lam, eps, max(lam, t0 + t1), b_value(eps, ctx))


@dataclass(frozen=True)
class UnipotentBounds:
    s: int
    period: int
    onset: int

    def __iter__(self):
        return iter((self.s, self.period, self.onset))


def bound_unipotent(t: int, d: int, ctx: QContext) -> UnipotentBounds:
    target = 2 * t + 7 * d if ctx.q_int == 2 else t + 4 * d
    w, ell = ctx.w, ctx.ell
    s = 0
    while w * ell**s < target:
        s += 1
    return UnipotentBounds(s, w * ell ** (s + 2 * d + 1), max(d + 2 * t, 4 * d + 3))
