"""Property suites shared by ``qdivided verify all`` and the test-suite.

Every suite returns a JSON-ready dict with a ``pass`` flag, the number of
checks performed and a (truncated) list of failure witnesses.  Randomness
comes only from the ``random.Random`` passed in.
"""
from __future__ import annotations

import random
from typing import Iterable

import numpy as np

from . import linalg
from .dalg import DElement, d_derive, d_mul, from_taylor, taylor_expand, x
from .dmod import (
    Connection,
    FPModule,
    GradedVectorData,
    TruncationTooSmall,
    as_graded,
    bound_unipotent,
    bound_vimod,
    connection_kernel_decompose,
    epsilon_lambda,
    generator_vectors,
    graded_quotient,
    graded_submodule,
    iterated_connection_check,
    phi_map,
    predict_period,
)
from .qarith import QContext, q_binomial

__all__ = [
    "DEFAULT_CONTEXTS",
    "qpascal_suite",
    "dalg_suite",
    "iterated_suite",
    "connection_suite",
    "invariants_suite",
    "bounds_suite",
    "BOUND_TABLE",
    "gl_index_suite",
    "free_connection_module",
    "specht_suite",
    "specht_dimension_series",
    "FIT_TABLE",
]

DEFAULT_CONTEXTS = [(2, 3), (3, 2), (3, 4), (5, 2), (5, 4), (7, 2), (2, 5), (3, 5)]
MAX_WITNESSES = 10


def _result(name: str, checked: int, failures: list, **extra) -> dict:
    out = {"suite": name, "checked": checked, "failures": len(failures),
           "witnesses": failures[:MAX_WITNESSES], "pass": not failures}
    out.update(extra)
    return out


def _contexts(pairs) -> list[QContext]:
    return [QContext(ell, q) for ell, q in pairs]


# ---------------------------------------------------------------------------
# q-combinatorics and the algebra


def qpascal_suite(pairs=DEFAULT_CONTEXTS, nmax: int = 60) -> dict:
    """Both Pascal recurrences and symmetry for 0 < m < n <= nmax."""
    checked, bad = 0, []
    for ctx in _contexts(pairs):
        ell = ctx.ell
        for n in range(2, nmax + 1):
            for m in range(1, n):
                a = q_binomial(n, m, ctx)
                f1 = (ctx.qpow(m) * q_binomial(n - 1, m, ctx) + q_binomial(n - 1, m - 1, ctx)) % ell
                f2 = (q_binomial(n - 1, m, ctx) + ctx.qpow(n - m) * q_binomial(n - 1, m - 1, ctx)) % ell
                checked += 1
                if not a == f1 == f2 == q_binomial(n, n - m, ctx):
                    bad.append({"ell": ell, "q": ctx.q_int, "n": n, "m": m})
    return _result("q-pascal", checked, bad)


def dalg_suite(pairs=DEFAULT_CONTEXTS, nmax: int = 40, rng: random.Random | None = None, triples: int = 200) -> dict:
    """Leibniz on basis pairs, associativity on random triples, Taylor round trips."""
    rng = rng or random.Random(0)
    checked, bad = 0, []
    for ctx in _contexts(pairs):
        for n in range(nmax + 1):
            for m in range(nmax + 1 - n):
                a, b = x(n, ctx), x(m, ctx)
                lhs = d_derive(d_mul(a, b))
                rhs = d_mul(a, d_derive(b)) + d_mul(d_derive(a), b).scale(ctx.qpow(m))
                checked += 1
                if lhs != rhs:
                    bad.append({"check": "leibniz", "ell": ctx.ell, "q": ctx.q_int, "n": n, "m": m})
        for _ in range(triples):
            a, b, c = (_random_element(ctx, rng, nmax // 3) for _ in range(3))
            checked += 1
            if d_mul(d_mul(a, b), c) != d_mul(a, d_mul(b, c)) or d_mul(a, b) != d_mul(b, a):
                bad.append({"check": "assoc", "ell": ctx.ell, "q": ctx.q_int})
        for _ in range(triples):
            a = _random_element(ctx, rng, 60)
            checked += 1
            if from_taylor(taylor_expand(a), ctx) != a:
                bad.append({"check": "taylor", "ell": ctx.ell, "q": ctx.q_int})
    return _result("dalg", checked, bad)


def _random_element(ctx: QContext, rng: random.Random, maxdeg: int) -> DElement:
    terms = {rng.randrange(maxdeg + 1): rng.randrange(1, ctx.ell) for _ in range(rng.randrange(1, 4))}
    return DElement(ctx, terms)


# ---------------------------------------------------------------------------
# modules with connections


def free_connection_module(ctx: QContext, degrees: Iterable[int], N: int, rng: random.Random | None = None):
    """Free module with componentwise d, conjugated by a random unitriangular automorphism."""
    degrees = sorted(int(d) for d in degrees)
    ell = ctx.ell
    M = FPModule(ctx, degrees)
    data = as_graded(M, N)
    # generator j sits at coordinate index j in every degree >= degrees[j]
    alive = [[j for j, d in enumerate(degrees) if d <= n] for n in range(N + 1)]
    coeff = np.zeros((len(degrees), len(degrees)), dtype=np.int64)
    if rng is not None:
        for j in range(len(degrees)):
            for i in range(j):
                coeff[i, j] = rng.randrange(ell)

    def auto(n: int, inverse: bool = False) -> np.ndarray:
        cols = alive[n]
        A = np.eye(len(cols), dtype=np.int64)
        for b, j in enumerate(cols):
            e = n - degrees[j]
            for a, i in enumerate(cols):
                if i < j and coeff[i, j]:
                    # e_j -> e_j + c e_i x^[deg_j - deg_i], then times x^[e]
                    k = degrees[j] - degrees[i]
                    A[a, b] = coeff[i, j] * q_binomial(k + e, e, ctx) % ell
        return linalg.inverse(A, ell) if inverse else A

    def base(n: int) -> np.ndarray:
        src, dst = alive[n], alive[n - 1]
        pos = {j: i for i, j in enumerate(dst)}
        m = np.zeros((len(dst), len(src)), dtype=np.int64)
        for i, j in enumerate(src):
            if j in pos:
                m[pos[j], i] = 1
        return m

    def maps(n: int) -> np.ndarray:
        return auto(n - 1) @ base(n) @ auto(n, inverse=True) % ell

    return data, Connection(data, maps, 1)


def iterated_suite(pairs=DEFAULT_CONTEXTS, samples: int = 500, rng: random.Random | None = None, N: int = 24) -> dict:
    """The iterated q-connection identity on sampled (m, a, n) triples per context."""
    rng = rng or random.Random(0)
    checked, bad = 0, []
    for ctx in _contexts(pairs):
        modules = [free_connection_module(ctx, [0], N),
                   free_connection_module(ctx, [0, 2, 5], N, rng),
                   free_connection_module(ctx, [1, 1, 3, 4], N, rng)]
        done = 0
        while done < samples:
            data, nabla = modules[rng.randrange(len(modules))]
            n = rng.randrange(1, 6)
            rep = iterated_connection_check(data, nabla, n, 1, rng)
            done += rep["checked"]
            for f in rep["failures"]:
                bad.append(dict(f, n=n, ell=ctx.ell, q=ctx.q_int))
        checked += done
    return _result("iterated-connection", checked, bad)


def _phi_linear(data: GradedVectorData, nabla: Connection) -> list:
    """Phi(m x^[k]) = Phi(m) x^[k] on all basis vectors."""
    ctx, ell, N = data.ctx, data.ctx.ell, data.N
    bad = []
    phis = [phi_map(nabla, n) for n in range(N + 1)]
    for n in range(N + 1):
        for k in range(N - n + 1):
            act = data.act(n, k)
            for j, block in enumerate(phis[n + k]):
                lhs = block @ act % ell
                rhs = q_binomial(j, k, ctx) * phis[n][j - k] % ell if j >= k else np.zeros_like(lhs)
                if np.any((lhs - rhs) % ell):
                    bad.append({"n": n, "k": k, "j": j})
    return bad


def connection_suite(pairs=DEFAULT_CONTEXTS, N: int = 60, rng: random.Random | None = None) -> dict:
    """Kernel, freeness, surjectivity and Phi checks up to degree N."""
    rng = rng or random.Random(0)
    checked, bad = 0, []
    for ctx in _contexts(pairs):
        shapes = [[0], [0, 2], [1, 3, 3], [0, 4, 9]]
        for degs in shapes:
            data, nabla = free_connection_module(ctx, degs, N, rng)
            try:
                dec = connection_kernel_decompose(data, nabla)
                want = [sum(1 for d in degs if d == n) for n in range(N + 1)]
                if dec.kernel_dims != want:
                    bad.append({"ell": ctx.ell, "q": ctx.q_int, "degrees": degs, "kernel": dec.kernel_dims})
            except ValueError as exc:
                bad.append({"ell": ctx.ell, "q": ctx.q_int, "degrees": degs, "error": str(exc)})
            checked += 1
            for f in _phi_linear(data.truncate(min(N, 20)), Connection(data.truncate(min(N, 20)), nabla.maps, 1)):
                bad.append(dict(f, ell=ctx.ell, q=ctx.q_int, degrees=degs, check="phi"))
            checked += 1
    return _result("connection", checked, bad)


# ---------------------------------------------------------------------------
# epsilon / lambda on modules and extensions


def _random_relation(ctx, degrees, rng, lo=1, hi=5):
    rd = max(degrees) + rng.randrange(lo, hi)
    row = {}
    for j, d in enumerate(degrees):
        if rng.random() < 0.7:
            row[j] = x(rd - d, ctx, rng.randrange(1, ctx.ell))
    return row or {0: x(rd - degrees[0], ctx)}


def _random_module(ctx, rng) -> FPModule:
    degs = sorted(rng.randrange(0, 4) for _ in range(rng.randrange(1, 3)))
    rels = [_random_relation(ctx, degs, rng) for _ in range(rng.randrange(0, 3))]
    return FPModule(ctx, degs, rels)


def _extension(K: FPModule, M: FPModule, rng) -> FPModule:
    """Generators of K then M; M's relations pick up random K-components."""
    ctx = K.ctx
    off = len(K.gen_degrees)
    degs = list(K.gen_degrees) + list(M.gen_degrees)
    rels = [dict(row) for row in K.relations]
    for row in M.relations:
        new = {j + off: a for j, a in row}
        rd = M.relation_degree(row)
        for j, d in enumerate(K.gen_degrees):
            if d <= rd and rng.random() < 0.5:
                new[j] = x(rd - d, ctx, rng.randrange(1, ctx.ell))
        rels.append(new)
    return FPModule(ctx, degs, rels)


def _lam(v):
    return v.lam


def invariants_suite(pairs=((3, 2), (2, 3), (5, 4), (3, 4)), count: int = 24, N: int = 40,
                     rng: random.Random | None = None) -> dict:
    """Periodicity (a), extensions (b) and subquotients (c) on constructed modules."""
    rng = rng or random.Random(0)
    ctxs = _contexts(pairs)
    checked, bad, done, skipped = 0, [], 0, 0
    attempts = 0
    while done < count and attempts < 20 * count:
        attempts += 1
        ctx = ctxs[attempts % len(ctxs)]
        K, M = _random_module(ctx, rng), _random_module(ctx, rng)
        L = _extension(K, M, rng)
        try:
            Ld = as_graded(L, N)
            Kd, bases = graded_submodule(Ld, generator_vectors(L, N)[: len(K.gen_degrees)])
            Md = graded_quotient(Ld, bases)
            eK, eL, eM = epsilon_lambda(Kd, N), epsilon_lambda(Ld, N), epsilon_lambda(Md, N)
        except TruncationTooSmall:
            skipped += 1
            continue
        done += 1
        wit = {"ell": ctx.ell, "q": ctx.q_int, "L": L.to_json()}
        lams = [v.lam for v in (eK, eM) if v.lam is not None]
        # (a) periodicity on all three
        for name, data in (("K", Kd), ("L", Ld), ("M", Md)):
            cert = predict_period(data, N)
            checked += 1
            if not cert.ok:
                bad.append(dict(wit, check="a", module=name))
        # (b) epsilon and lambda across the extension
        checked += 1
        if eL.epsilon > max(eK.epsilon, eM.epsilon):
            bad.append(dict(wit, check="b-epsilon"))
        checked += 1
        if eL.lam != (max(lams) if lams else None):
            bad.append(dict(wit, check="b-lambda", lams=[eK.lam, eL.lam, eM.lam]))
        # (c) sub and quotient
        for v in (eK, eM):
            checked += 1
            if v.lam is not None and eL.lam is not None and v.lam > eL.lam:
                bad.append(dict(wit, check="c"))
    return _result("lambda-epsilon", checked, bad, modules=done, skipped=skipped)


# ---------------------------------------------------------------------------
# bound calculators


# (kind, args, q, ell, expected); expected values are hand evaluations
BOUND_TABLE = [
    ("vimod", dict(t=0, t0=0, t1=0, delta=0), 3, 2, (0, 1, 0, 2)),
    ("vimod", dict(t=1, t0=0, t1=0, delta=1), 2, 3, (3, 6, 3, 486)),
    ("vimod", dict(t=2, t0=2, t1=3, delta=1), 3, 2, (3, 6, 5, 64)),
    ("vimod", dict(t=0, t0=0, t1=0, delta=1), 4, 5, (1, 5, 1, 1250)),
    ("vimod", dict(t=3, t0=1, t1=1, delta=0), 2, 5, (6, 3, 6, 100)),
    ("unipotent", dict(t=0, d=1), 2, 3, (2, 486, 7)),
    ("unipotent", dict(t=0, d=1), 3, 2, (2, 32, 7)),
    ("unipotent", dict(t=0, d=0), 2, 3, (0, 6, 3)),
    ("unipotent", dict(t=1, d=2), 2, 3, (2, 4374, 11)),
    ("unipotent", dict(t=3, d=1), 4, 3, (2, 243, 7)),
]


def bounds_suite() -> dict:
    checked, bad = 0, []
    for kind, args, q, ell, want in BOUND_TABLE:
        ctx = QContext(ell, q)
        got = tuple(bound_vimod(ctx=ctx, **args)) if kind == "vimod" else tuple(bound_unipotent(ctx=ctx, **args))
        checked += 1
        if got != want:
            bad.append({"kind": kind, "args": args, "q": q, "ell": ell, "got": list(got), "want": list(want)})
    return _result("bounds", checked, bad)


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def gl_index_suite(total: int = 5, qs=(2, 3, 4), ells=(2, 3, 5)) -> dict:
    """[GL_{n+m} : P_{n,m}] mod ell against q_binomial(n+m, n), from group orders."""
    checked, bad = 0, []
    for q in qs:
        for ell in ells:
            if q % ell == 0:
                continue
            ctx = QContext(ell, q)
            for s in range(1, total + 1):
                for n in range(s + 1):
                    m = s - n
                    index = gl_order(s, q) // (gl_order(n, q) * gl_order(m, q) * q ** (n * m))
                    checked += 1
                    if index % ell != q_binomial(s, n, ctx):
                        bad.append({"q": q, "ell": ell, "n": n, "m": m})
    return _result("gl-index", checked, bad)


# ---------------------------------------------------------------------------
# Specht modules


# (mu, q, ell, n range); the fitted degree should equal |mu|
FIT_TABLE = [
    ((1,), 2, 3, range(2, 8)),
    ((1,), 3, 2, range(2, 6)),
    ((1, 1), 2, 3, range(3, 7)),
    ((2,), 2, 3, range(4, 8)),
]


def specht_dimension_series(mu, q: int, ell: int, ns) -> list[tuple[int, int]]:
    from .spechtlab import MAX_FLAGS, composition, flag_count, specht_dim

    out = []
    d = sum(mu)
    for n in ns:
        full = composition((n - d,) + tuple(mu)) if n >= d else None
        if full is None or list(full) != sorted(full, reverse=True) or flag_count(full, q) > MAX_FLAGS:
            continue
        out.append((n, specht_dim(full, q, ell)))
    return out


def specht_suite(fits: bool = True) -> dict:
    """Flag counts, Steinberg and trivial dimensions, and dimension-polynomial degrees."""
    from .spechtlab import fit_dimension_polynomial, flag_count, flags, specht_dim

    checked, bad = 0, []
    for q in (2, 3):
        for mu in [(1,), (2,), (1, 1), (3,), (2, 1), (1, 2), (1, 1, 1)]:
            checked += 1
            if len(flags(mu, q)) != flag_count(mu, q):
                bad.append({"check": "flags", "mu": list(mu), "q": q})
        for ell in (2, 3, 5, 7):
            if q % ell == 0:
                continue
            for d in (1, 2, 3):
                checked += 2
                if specht_dim((d,), q, ell) != 1:
                    bad.append({"check": "trivial", "d": d, "q": q, "ell": ell})
                if specht_dim((1,) * d, q, ell) != q ** (d * (d - 1) // 2):
                    bad.append({"check": "steinberg", "d": d, "q": q, "ell": ell})
    degrees = []
    if fits:
        for mu, q, ell, ns in FIT_TABLE:
            series = specht_dimension_series(mu, q, ell, ns)
            fit = fit_dimension_polynomial(series, q)
            checked += 1
            degrees.append({"mu": list(mu), "q": q, "ell": ell, "degree": fit.degree, "onset": fit.onset})
            if fit.degree != sum(mu):
                bad.append({"check": "fit", "mu": list(mu), "q": q, "ell": ell, "degree": fit.degree})
    return _result("specht", checked, bad, fits=degrees)
