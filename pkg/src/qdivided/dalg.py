"""The q-divided power algebra in one variable over F_ell.

Basis ``x^[n]`` (degree n) with ``x^[n] * x^[m] = [n+m choose n]_q x^[n+m]``
and derivation ``d(x^[n]) = x^[n-1]``.  Elements are sparse, immutable
degree -> coefficient maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .qarith import QContext, b_value, q_binomial

__all__ = [
    "ContextMismatch",
    "DElement",
    "YMonomial",
    "x",
    "d_mul",
    "d_derive",
    "taylor_expand",
    "from_taylor",
    "mixed_radix_digits",
    "y_radices",
    "to_y_basis",
    "y_monomial_value",
    "in_subring",
]


class ContextMismatch(ValueError):
    pass


class DElement:
    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: QContext, terms: Mapping[int, int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for deg, c in items:
            deg = int(deg)
            if deg < 0:
                raise ValueError("negative degree")
            acc[deg] = (acc.get(deg, 0) + int(c)) % ctx.ell
        self.ctx = ctx
        self._terms = tuple(sorted((n, c) for n, c in acc.items() if c))

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def coeff(self, n: int) -> int:
        return self.terms.get(n, 0)

    def degrees(self) -> list[int]:
        return [n for n, _ in self._terms]

    @property
    def degree(self) -> int | None:
        """Top degree, or None for zero."""
        return self._terms[-1][0] if self._terms else None

    def is_homogeneous(self) -> bool:
        return len(self._terms) <= 1

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other: "DElement"):
        if not isinstance(other, DElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch("elements live over different contexts")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DElement(self.ctx, list(self._terms) + list(other._terms))

    def __neg__(self):
        return DElement(self.ctx, [(n, -c) for n, c in self._terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "DElement":
        return DElement(self.ctx, [(n, c * a) for n, a in self._terms])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return d_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, DElement):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx.ell, self.ctx.q_int, self._terms))

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*x[{n}]" for n, c in self._terms)

    def to_json(self) -> list[list[int]]:
        return [[n, c] for n, c in self._terms]


def x(n: int, ctx: QContext, coeff: int = 1) -> DElement:
    return DElement(ctx, {n: coeff})


def d_mul(a: DElement, b: DElement) -> DElement:
    if a.ctx != b.ctx:
        raise ContextMismatch("elements live over different contexts")
    ctx = a.ctx
    out: dict[int, int] = {}
    for n, c in a._terms:
        for m, e in b._terms:
            k = q_binomial(n + m, n, ctx)
            if k:
                out[n + m] = (out.get(n + m, 0) + c * e * k) % ctx.ell
    return DElement(ctx, out)


def d_derive(a: DElement, iterations: int = 1) -> DElement:
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    return DElement(a.ctx, [(n - iterations, c) for n, c in a._terms if n >= iterations])


def taylor_expand(a: DElement) -> list[tuple[int, int]]:
    """Pairs ``(d^n(a)_0, n)`` with nonzero constant term."""
    top = a.degree
    if top is None:
        return []
    out = []
    for n in range(top + 1):
        c = d_derive(a, n).coeff(0)
        if c:
            out.append((c, n))
    return out


def from_taylor(expansion: Iterable[tuple[int, int]], ctx: QContext) -> DElement:
    return DElement(ctx, [(n, c) for c, n in expansion])


@dataclass(frozen=True)
class YMonomial:
    """Monomial prod y_i^{c_i}, stored as sorted ``(i, c_i)`` pairs with c_i > 0."""

    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_digits(cls, digits: Iterable[int]) -> "YMonomial":
        return cls(tuple((i, c) for i, c in enumerate(digits) if c))

    def degree(self, ctx: QContext) -> int:
        return sum(c * b_value(i, ctx) for i, c in self.exponents)

    def indices(self) -> set[int]:
        return {i for i, _ in self.exponents}

    def __repr__(self):
        if not self.exponents:
            return "1"
        return "*".join(f"y{i}^{c}" if c > 1 else f"y{i}" for i, c in self.exponents)


def y_radices(ctx: QContext, upto: int) -> list[int]:
    """b_{i+1}/b_i for i < upto: the exponent bound of y_i."""
    return [b_value(i + 1, ctx) // b_value(i, ctx) for i in range(upto)]


def mixed_radix_digits(n: int, ctx: QContext) -> list[int]:
    """Digits c_i with n = sum c_i b_i and 0 <= c_i < b_{i+1}/b_i."""
    digits = []
    i = 0
    while b_value(i, ctx) <= n:
        i += 1
    for j in reversed(range(i)):
        bj = b_value(j, ctx)
        digits.append(n // bj)
        n %= bj
    digits.reverse()
    return digits


def y_monomial_value(mono: YMonomial, ctx: QContext) -> DElement:
    """Multiply out prod (x^[b_i])^{c_i} inside the algebra."""
    out = x(0, ctx)
    for i, c in mono.exponents:
        gen = x(b_value(i, ctx), ctx)
        for _ in range(c):
            out = d_mul(out, gen)
    return out


def to_y_basis(a: DElement) -> list[tuple[int, YMonomial]]:
    """Rewrite ``a`` as a combination of y-monomials.

    Each x^[n] equals u_n * prod y_i^{c_i} where the digits are the mixed-radix
    expansion of n and the unit u_n is found by multiplying the monomial out.
    """
    ctx = a.ctx
    out = []
    for n, c in a._terms:
        mono = YMonomial.from_digits(mixed_radix_digits(n, ctx))
        val = y_monomial_value(mono, ctx).coeff(n)
        if val == 0:
            raise ArithmeticError(f"y-monomial for degree {n} vanishes")
        unit = pow(val, -1, ctx.ell)
        out.append(((c * unit) % ctx.ell, mono))
    return out


def in_subring(a: DElement, indices) -> bool:
    """Does ``a`` lie in the subring generated by y_i, i in ``indices``?

    ``indices`` is a container; pass ``range(r, 10**9)`` style objects or a
    predicate-supporting set for D_{>=r}.
    """
    ctx = a.ctx
    for n in a.degrees():
        digits = mixed_radix_digits(n, ctx)
        if any(c and i not in indices for i, c in enumerate(digits)):
            return False
    return True
