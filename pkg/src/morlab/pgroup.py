"""The extra-special p-group of order p^(2n+1) and exponent p (p odd).

Elements are kept in the normal form
``x_1^a_1 ... x_n^a_n * y_1^b_1 ... y_n^b_n * z^c``.  The defining relation
[x_i, y_i] = z means y_i x_i = x_i y_i z^-1, so collecting a product into normal
form costs a central correction of -(b . a').
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import FpElem, check_prime
from .errors import InvalidInput


@dataclass(frozen=True)
class EsParams:
    p: int
    n: int

    def __post_init__(self):
        check_prime(self.p)
        if self.p == 2:
            raise InvalidInput("exponent-p extra-special arithmetic needs an odd prime")
        if self.n < 1:
            raise InvalidInput("n must be positive")

    @property
    def order(self) -> int:
        return self.p ** (2 * self.n + 1)

    def identity(self) -> "EsElement":
        z = (0,) * self.n
        return EsElement(z, z, 0, self)

    def x(self, i: int) -> "EsElement":
        return self.element(_unit(self.n, i), (0,) * self.n, 0)

    def y(self, i: int) -> "EsElement":
        return self.element((0,) * self.n, _unit(self.n, i), 0)

    def z(self) -> "EsElement":
        return self.element((0,) * self.n, (0,) * self.n, 1)

    def generators(self) -> list["EsElement"]:
        """x_1..x_n, y_1..y_n (the order used for automorphism matrix columns)."""
        return [self.x(i) for i in range(self.n)] + [self.y(i) for i in range(self.n)]

    def element(self, a: Sequence[int], b: Sequence[int], c: int) -> "EsElement":
        p = self.p
        if len(a) != self.n or len(b) != self.n:
            raise InvalidInput(f"exponent vectors must have length {self.n}")
        return EsElement(tuple(int(v) % p for v in a), tuple(int(v) % p for v in b), int(c) % p, self)

    def from_vector(self, u: Sequence[int], c: int = 0) -> "EsElement":
        """Coset representative of u in G/Z (first n entries are x-exponents)."""
        return self.element(u[: self.n], u[self.n :], c)

    def random(self, rng: np.random.Generator) -> "EsElement":
        vals = [int(v) for v in rng.integers(0, self.p, size=2 * self.n + 1)]
        return self.element(vals[: self.n], vals[self.n : 2 * self.n], vals[-1])

    def elements(self):
        """Every element, for exhaustive checks on tiny groups."""
        p, n = self.p, self.n
        for idx in range(self.order):
            digits = []
            for _ in range(2 * n + 1):
                digits.append(idx % p)
                idx //= p
            yield self.element(digits[:n], digits[n : 2 * n], digits[-1])


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


@dataclass(frozen=True, slots=True)
class EsElement:
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int
    params: EsParams

    def __mul__(self, other: "EsElement") -> "EsElement":
        return es_mul(self, other)

    def __pow__(self, k: int) -> "EsElement":
        return es_pow(self, k)

    def inverse(self) -> "EsElement":
        return es_pow(self, -1)

    def is_identity(self) -> bool:
        return self.c == 0 and not any(self.a) and not any(self.b)

    def vector(self) -> tuple[int, ...]:
        """Image in G/Z as a length-2n vector."""
        return self.a + self.b

    def digits(self) -> tuple[int, ...]:
        return self.a + self.b + (self.c,)

    def __repr__(self):
        return f"EsElement(a={list(self.a)}, b={list(self.b)}, c={self.c}, p={self.params.p})"


def _same(g: EsElement, h: EsElement) -> None:
    if g.params != h.params:
        raise InvalidInput(f"elements of different groups: {g.params} vs {h.params}")


def es_mul(g: EsElement, h: EsElement) -> EsElement:
    _same(g, h)
    p = g.params.p
    return EsElement(
        tuple((x + y) % p for x, y in zip(g.a, h.a)),
        tuple((x + y) % p for x, y in zip(g.b, h.b)),
        (g.c + h.c - _dot(g.b, h.a)) % p,
        g.params,
    )


def es_pow(g: EsElement, k: int) -> EsElement:
    """Closed form (a, b, c)^k = (ka, kb, kc - C(k,2) a.b); valid for negative k."""
    p = g.params.p
    k = int(k)
    binom = k * (k - 1) // 2
    return EsElement(
        tuple(k * x % p for x in g.a),
        tuple(k * x % p for x in g.b),
        (k * g.c - binom * _dot(g.a, g.b)) % p,
        g.params,
    )


def es_commutator(g: EsElement, h: EsElement) -> EsElement:
    """g^-1 h^-1 g h."""
    _same(g, h)
    return es_mul(es_mul(es_pow(g, -1), es_pow(h, -1)), es_mul(g, h))


def symplectic_form(n: int, p: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]] so that B(u, w) = u^T J w."""
    j = np.zeros((2 * n, 2 * n), dtype=np.int64 if p < 1 << 31 else object)
    for i in range(n):
        j[i, n + i] = 1
        j[n + i, i] = p - 1
    return j


def bilinear_B(u: Sequence[int], v: Sequence[int], p: int) -> FpElem:
    """The commutator form on G/Z: B(u, v) = a.b' - b.a'."""
    if len(u) != len(v) or len(u) % 2:
        raise InvalidInput("B needs two vectors of the same even length")
    n = len(u) // 2
    return FpElem(_dot(u[:n], v[n:]) - _dot(u[n:], v[:n]), p)


def series_sections(params: EsParams) -> list[int]:
    """Section dimensions of the exponent-p central series: G/Phi(G), then Phi(G) = Z(G)."""
    return [2 * params.n, 1]


def orthogonal_group_order(n: int, eps: int) -> int:
    """|O_eps(2n, 2)| = 2^(n(n-1)+1) (2^n - eps) prod_{i<n} (2^(2i) - 1)."""
    if n < 1 or eps not in (1, -1):
        raise InvalidInput("need n >= 1 and eps = +-1")
    out = 2 ** (n * (n - 1) + 1) * (2**n - eps)
    for i in range(1, n):
        out *= 2 ** (2 * i) - 1
    return out
