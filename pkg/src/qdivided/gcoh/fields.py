"""Finite fields F_q as addition/multiplication tables, and the action of
matrices over F_q on the nonzero vectors of F_q^n."""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from ..qarith import is_prime

__all__ = ["GF", "gf", "VectorSpace"]


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                break
            return p, k
    raise ValueError(f"{q} is not a prime power")


class GF:
    """F_q with elements 0..q-1 (base-p digit vectors of polynomials)."""

    def __init__(self, q: int):
        p, k = _prime_power(q)
        self.q, self.p, self.k = q, p, k
        digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul = self._mul_table(digits, weights)
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self.primitive = self._primitive()

    def _mul_table(self, digits, weights):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            a = np.arange(q)
            return np.outer(a, a) % p
        for tail in product(range(p), repeat=k):
            poly = list(tail) + [1]  # monic, low degree first
            table = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    prod = np.convolve(digits[a], digits[b]) % p
                    prod = list(prod) + [0] * (2 * k - 1 - len(prod))
                    for deg in range(2 * k - 2, k - 1, -1):
                        c = prod[deg]
                        if c:
                            for i in range(k + 1):
                                prod[deg - k + i] = (prod[deg - k + i] - c * poly[i]) % p
                    table[a, b] = int(np.dot(prod[:k], weights))
            if np.all(table[1:, 1:] != 0):
                return table
        raise ArithmeticError("no irreducible polynomial found")

    def _primitive(self) -> int:
        for a in range(1, self.q):
            x, seen = a, 1
            while x != 1:
                x = self.mul[x, a]
                seen += 1
            if seen == self.q - 1:
                return a
        raise ArithmeticError("no primitive element")

    def additive_basis(self) -> list[int]:
        return [self.p**i for i in range(self.k)]


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)


class VectorSpace:
    """Nonzero vectors of F_q^n labelled by ``sum v_i q^i - 1``."""

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.field = gf(q)
        codes = np.arange(1, q**n, dtype=np.int64)
        self.vectors = np.stack([(codes // q**i) % q for i in range(n)], axis=1) if n else np.zeros((0, 0), dtype=np.int64)
        self.npoints = q**n - 1
        self.weights = q ** np.arange(n, dtype=np.int64)

    def point(self, vecs: np.ndarray) -> np.ndarray:
        return np.asarray(vecs, dtype=np.int64) @ self.weights - 1

    def basis_points(self) -> np.ndarray:
        return self.weights - 1

    def apply(self, mats: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        """Images ``M v`` for a batch of matrices (b,n,n) and vectors (P,n)."""
        F = self.field
        mats = np.asarray(mats, dtype=np.int64)
        out = np.zeros((mats.shape[0], vecs.shape[0], self.n), dtype=np.int64)
        for j in range(self.n):
            term = F.mul[mats[:, None, :, j], vecs[None, :, j, None]]  # (b, P, n)
            out = F.add[out, term]
        return out

    def mats_to_perms(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64).reshape(-1, self.n, self.n)
        imgs = self.apply(mats, self.vectors)
        return self.point(imgs)

    def perms_to_mats(self, perms) -> np.ndarray:
        perms = np.asarray(perms, dtype=np.int64).reshape(-1, self.npoints)
        cols = self.vectors[perms[:, self.basis_points()]]  # (b, n_cols, n)
        return cols.transpose(0, 2, 1)
