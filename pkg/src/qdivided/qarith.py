"""Prime-field arithmetic and q-combinatorics.

Field elements are plain Python ints in ``range(ell)``.  A :class:`QContext`
fixes the characteristic ``ell`` together with an integer prime power ``q``
invertible mod ``ell``; everything downstream (the divided power algebra,
module invariants, group cohomology) is parametrised by one.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from math import gcd

__all__ = [
    "NotInvertible",
    "PrimeField",
    "QContext",
    "is_prime",
    "order_of_q",
    "q_integer",
    "q_binomial",
    "b_value",
    "b_sequence",
    "fl",
    "gaussian_binomial_int",
    "q_multinomial_int",
]


class NotInvertible(ValueError):
    """q is not a unit modulo ell."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    ell: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")

    def __call__(self, a: int) -> int:
        return a % self.ell

    def inv(self, a: int) -> int:
        a %= self.ell
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.ell)


def order_of_q(ell: int, q_int: int) -> int:
    """Multiplicative order of ``q_int`` modulo ``ell``."""
    if q_int % ell == 0:
        raise NotInvertible(f"{ell} divides {q_int}")
    x, w = q_int % ell, 1
    while x != 1:
        x = (x * q_int) % ell
        w += 1
    return w


@dataclass(frozen=True)
class QContext:
    """The pair (ell, q) with derived data ``q`` mod ell and its order ``w``.

    ``q_int = 1`` is allowed and describes the symmetric-group case.
    """

    ell: int
    q_int: int
    _pascal: list = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.q_int < 1:
            raise ValueError("q must be a positive integer")
        if gcd(self.q_int, self.ell) != 1:
            raise NotInvertible(f"q={self.q_int} is not invertible mod {self.ell}")

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.ell)

    @property
    def q(self) -> int:
        return self.q_int % self.ell

    @property
    def w(self) -> int:
        return order_of_q(self.ell, self.q_int)

    def qpow(self, k: int) -> int:
        """q**k in F_ell; negative k allowed since q is a unit."""
        return pow(self.q, k, self.ell)

    def _row(self, n: int) -> list[int]:
        rows = self._pascal
        if n < len(rows):
            return rows[n]
        with self._lock:
            ell, q = self.ell, self.q
            if not rows:
                rows.append([1])
            while len(rows) <= n:
                k = len(rows)
                prev = rows[-1]
                new = [1] * (k + 1)
                qm = 1
                for m in range(1, k):
                    qm = (qm * q) % ell
                    # [k, m] = q^m [k-1, m] + [k-1, m-1]
                    new[m] = (qm * prev[m] + prev[m - 1]) % ell
                rows.append(new)
        return rows[n]


def q_integer(n: int, ctx: QContext) -> int:
    """[n]_q = 1 + q + ... + q^(n-1) in F_ell."""
    return sum(ctx.qpow(i) for i in range(n)) % ctx.ell


def q_binomial(n: int, m: int, ctx: QContext) -> int:
    """Gaussian binomial [n choose m]_q evaluated in F_ell (0 outside 0<=m<=n)."""
    if n < 0 or m < 0 or m > n:
        return 0
    return ctx._row(n)[m]


def b_value(i: int, ctx: QContext) -> int:
    if i < 0:
        raise ValueError("index must be non-negative")
    if i == 0:
        return 1
    w = ctx.w
    if w > 1:
        return w * ctx.ell ** (i - 1)
    return ctx.ell**i


def b_sequence(ctx: QContext, length: int) -> list[int]:
    return [b_value(i, ctx) for i in range(length)]


def fl(n: int, ctx: QContext) -> int:
    """Smallest r >= 0 with n <= b_r."""
    r = 0
    while n > b_value(r, ctx):
        r += 1
    return r


def gaussian_binomial_int(n: int, m: int, q: int) -> int:
    """Integer Gaussian binomial by the Pascal recurrence (no division)."""
    if m < 0 or m > n:
        return 0
    row = [1]
    for k in range(1, n + 1):
        new = [1] * (k + 1)
        for j in range(1, k):
            new[j] = q**j * row[j] + row[j - 1]
        row = new
    return row[m]


def q_multinomial_int(parts, q: int) -> int:
    """Number of flags with successive quotient dimensions ``parts`` in F_q^sum."""
    total, out = 0, 1
    for part in parts:
        total += part
        out *= gaussian_binomial_int(total, part, q)
    return out
