"""Brute-force reference computations used by the tests.

Nothing here imports the package's arithmetic: subspaces are explicit sets
of vectors, q-binomials come from the product formula, and ranks from a
plain elimination over F_p.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

# GF(4) = {0, 1, a, a+1} encoded as 0, 1, 2, 3; addition is xor
_GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def field_ops(q: int):
    if q == 4:
        return (lambda a, b: a ^ b), (lambda a, b: _GF4_MUL[a][b])
    if q in (2, 3, 5, 7):
        return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q)
    raise ValueError(f"oracle field F_{q} not available")


def gaussian_product(n: int, m: int, q: int) -> int:
    """prod_{i<m} (q^{n-i} - 1) / (q^{i+1} - 1), exact."""
    if m < 0 or m > n:
        return 0
    num = den = 1
    for i in range(m):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rank_mod_p(rows, p: int) -> int:
    rows = [[v % p for v in r] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# subspaces as sets of vectors


@lru_cache(maxsize=None)
def subspaces(q: int, d: int, max_dim: int | None = None) -> dict:
    """All subspaces of F_q^d (as frozensets of tuples) of dimension <= max_dim, by dimension."""
    add, mul = field_ops(q)
    vectors = list(product(range(q), repeat=d))
    zero = (0,) * d
    max_dim = d if max_dim is None else max_dim
    out = {0: {frozenset([zero])}}
    for k in range(1, max_dim + 1):
        layer = set()
        for S in out[k - 1]:
            for v in vectors:
                if v in S:
                    continue
                new = set()
                for s in S:
                    for c in range(q):
                        new.add(tuple(add(a, mul(c, b)) for a, b in zip(s, v)))
                layer.add(frozenset(new))
        out[k] = layer
    return out


def count_subspaces(q: int, d: int, k: int) -> int:
    return len(subspaces(q, d, k)[k])


# ---------------------------------------------------------------------------
# flags and Specht kernels


def flags_of_type(mu, q: int) -> list[tuple]:
    """Chains (V_1, ..., V_{k-1}) with dim V_{i-1}/V_i = mu_i."""
    d = sum(mu)
    subs = subspaces(q, d)
    full = next(iter(subs[d]))
    dims = [d - sum(mu[: i + 1]) for i in range(len(mu))]
    out = []

    def rec(prev, acc, level):
        if level == len(mu) - 1:
            out.append(tuple(acc))
            return
        for W in subs[dims[level]]:
            if W <= prev:
                rec(W, acc + [W], level + 1)

    rec(full, [], 0)
    return out


def specht_dim_oracle(mu, q: int, ell: int) -> int:
    """dim of the intersection of ker psi_{r-1,i} over 2 <= r <= k, 0 <= i < mu_r."""
    mu = tuple(mu)
    d, k = sum(mu), len(mu)
    subs = subspaces(q, d)
    full = next(iter(subs[d]))
    zero = next(iter(subs[0]))
    fl = flags_of_type(mu, q)
    col = {f: j for j, f in enumerate(fl)}
    rows = []
    for r in range(2, k + 1):
        for i in range(mu[r - 1]):
            s = r - 1  # replace V_s by W with V_{s+1} <= W <= V_{s-1}, dim W/V_{s+1} = i
            images: dict = {}
            for f in fl:
                chain = (full,) + f + (zero,)
                low, high = chain[s + 1], chain[s - 1]
                target_dim = _log(len(low), q)
                for W in subs[target_dim + i]:
                    if low <= W <= high:
                        new = chain[1:-1][: s - 1] + (W,) + chain[1:-1][s:]
                        images.setdefault(new, [0] * len(fl))[col[f]] += 1
            rows.extend(images.values())
    if not rows:
        return len(fl)
    return len(fl) - rank_mod_p(rows, ell)


def _log(n: int, q: int) -> int:
    k = 0
    while n > 1:
        n //= q
        k += 1
    return k


# ---------------------------------------------------------------------------
# cohomology of cyclic groups and Hilbert functions


def cyclic_cohomology_dims(order: int, ell: int, tmax: int) -> list[int]:
    """H^t(Z/order, F_ell): 1 in every degree when ell | order, else only H^0."""
    return [1 if (t == 0 or order % ell == 0) else 0 for t in range(tmax + 1)]


def hilbert_oracle(gen_degrees, relations, q: int, ell: int, N: int) -> list[int]:
    """relations: list of {generator: {degree: coeff}}; x^[e] x^[k] = [e+k, e]_q x^[e+k]."""
    out = []
    for n in range(N + 1):
        alive = [j for j, d in enumerate(gen_degrees) if d <= n]
        rows = []
        for row in relations:
            rd = {gen_degrees[j] + e for j, terms in row.items() for e in terms}
            (rd,) = rd
            if rd > n:
                continue
            vec = [0] * len(alive)
            for j, terms in row.items():
                for e, c in terms.items():
                    vec[alive.index(j)] += c * gaussian_product(e + n - rd, e, q)
            rows.append(vec)
        out.append(len(alive) - (rank_mod_p(rows, ell) if rows and alive else 0))
    return out
