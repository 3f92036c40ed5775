"""Square matrices over F_p.

Covers characteristic and minimal polynomials, companion matrices, the
Frobenius (rational canonical) form, two exponentiation routes and order
computation.  ``mat_pow_lg`` is Leedham-Green's method: reduce to the
Frobenius form, raise t to the exponent modulo the minimal polynomial, and
evaluate the result on the block matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels, _linalg
from .algebra import (
    ExtField,
    FactoredInteger,
    Poly,
    check_prime,
    factor_integer,
    factor_lcm,
    is_irreducible,
    mult_order,
    order_from_multiple,
    poly_gcd,
    poly_lcm,
    poly_powmod,
)
from .errors import CapExceededError, InvalidInput

SUBSPACE_SEARCH_CAP = 10**6
ORDER_CAP = 1 << 40


class MatrixFp:
    """Immutable d x d matrix over F_p backed by a read-only numpy array."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        p = check_prime(int(p))
        a = _linalg.as_field_array(entries, p)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidInput(f"expected a non-empty square matrix, got shape {a.shape}")
        a.setflags(write=False)
        self.a = a
        self.p = p

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "MatrixFp":
        obj = object.__new__(cls)
        a.setflags(write=False)
        obj.a = a
        obj.p = p
        return obj

    @classmethod
    def identity(cls, d: int, p: int) -> "MatrixFp":
        return cls(np.eye(d, dtype=np.int64), p)

    @classmethod
    def diag(cls, values: Sequence[int], p: int) -> "MatrixFp":
        return cls(np.diag(np.asarray(values, dtype=np.int64)), p)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def _check(self, other: "MatrixFp"):
        if not isinstance(other, MatrixFp):
            raise TypeError(f"expected MatrixFp, got {type(other).__name__}")
        if other.p != self.p:
            raise InvalidInput(f"modulus mismatch: {self.p} vs {other.p}")
        if other.dim != self.dim:
            raise InvalidInput(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "MatrixFp") -> "MatrixFp":
        self._check(other)
        return MatrixFp._wrap(_kernels.matmul_mod(self.a, other.a, self.p), self.p)

    __mul__ = __matmul__

    def __add__(self, other: "MatrixFp") -> "MatrixFp":
        self._check(other)
        return MatrixFp._wrap((self.a + other.a) % self.p, self.p)

    def __sub__(self, other: "MatrixFp") -> "MatrixFp":
        self._check(other)
        return MatrixFp._wrap((self.a - other.a) % self.p, self.p)

    def scale(self, k: int) -> "MatrixFp":
        return MatrixFp._wrap((self.a * (int(k) % self.p)) % self.p, self.p)

    def apply(self, v) -> np.ndarray:
        """M @ v for a column vector v."""
        v = _linalg.as_field_array(np.asarray(v).reshape(-1, 1), self.p)
        return _kernels.matmul_mod(self.a, v, self.p)[:, 0]

    def det(self) -> int:
        return _linalg.det(self.a, self.p)

    def inverse(self) -> "MatrixFp":
        return MatrixFp._wrap(_linalg.inverse(self.a, self.p), self.p)

    def transpose(self) -> "MatrixFp":
        return MatrixFp._wrap(self.a.T.copy(), self.p)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.a, np.eye(self.dim, dtype=np.int64)))

    def is_zero(self) -> bool:
        return not np.any(self.a != 0)

    def __pow__(self, e: int) -> "MatrixFp":
        return mat_pow_naive(self, e)

    def rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.a]

    def flat(self) -> list[int]:
        return [int(x) for x in self.a.ravel()]

    def __eq__(self, other):
        if not isinstance(other, MatrixFp):
            return NotImplemented
        return self.p == other.p and self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.p, tuple(self.flat())))

    def __repr__(self):
        return f"MatrixFp({self.rows()}, p={self.p})"


def mat_arith(a: MatrixFp, b: MatrixFp | None, op: str):
    if op == "mul":
        return a @ b
    if op == "add":
        return a + b
    if op == "inverse":
        return a.inverse()
    if op == "det":
        return a.det()
    raise ValueError(f"unknown matrix operation {op!r}")


def block_diag(blocks: Sequence[MatrixFp]) -> MatrixFp:
    p = blocks[0].p
    n = sum(b.dim for b in blocks)
    out = np.zeros((n, n), dtype=blocks[0].a.dtype)
    i = 0
    for b in blocks:
        out[i : i + b.dim, i : i + b.dim] = b.a
        i += b.dim
    return MatrixFp(out, p)


def eval_poly_at_matrix(f: Poly, m: MatrixFp) -> MatrixFp:
    """Horner evaluation f(M)."""
    if f.p != m.p:
        raise InvalidInput("modulus mismatch")
    acc = np.zeros_like(m.a)
    eye = np.eye(m.dim, dtype=np.int64).astype(m.a.dtype)
    for c in reversed(f.coeffs):
        acc = (_kernels.matmul_mod(acc, m.a, m.p) + c * eye) % m.p
    return MatrixFp._wrap(acc, m.p)


# ---------------------------------------------------------------------------
# polynomials attached to a matrix


def char_poly(m: MatrixFp) -> Poly:
    """det(xI - M) via reduction to upper Hessenberg form."""
    p, n = m.p, m.dim
    h = [[int(x) for x in row] for row in m.a]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = pow(h[j + 1][j], -1, p)
        for i in range(j + 2, n):
            u = h[i][j] * inv % p
            if not u:
                continue
            hi, hj = h[i], h[j + 1]
            for c in range(n):
                hi[c] = (hi[c] - u * hj[c]) % p
            for row in h:
                row[j + 1] = (row[j + 1] + u * row[i]) % p
    # p_k = (x - h_kk) p_{k-1} - sum_i h_{k-i,k} prod(subdiag) p_{k-i-1}
    x = Poly.x(p)
    polys = [Poly.one(p)]
    for k in range(n):
        pk = (x - Poly((h[k][k],), p)) * polys[k]
        prod = 1
        for i in range(1, k + 1):
            prod = prod * h[k - i + 1][k - i] % p
            if not prod:
                break
            pk = pk - polys[k - i] * (h[k - i][k] * prod % p)
        polys.append(pk)
    return polys[n]


def _spin(a: np.ndarray, v: np.ndarray, p: int) -> tuple[Poly, np.ndarray]:
    """Local minimal polynomial of v under a, and the Krylov basis as columns."""
    d = a.shape[0]
    reduced: list[tuple[int, np.ndarray, np.ndarray]] = []
    krylov: list[np.ndarray] = []
    w = v % p
    while True:
        k = len(krylov)
        r = w.copy()
        combo = np.zeros(d + 1, dtype=a.dtype)
        combo[k] = 1
        for pc, rv, cb in reduced:
            f = r[pc]
            if f:
                r = (r - f * rv) % p
                combo = (combo - f * cb) % p
        nz = np.flatnonzero(r != 0)
        if nz.size == 0:
            return Poly([int(c) for c in combo[: k + 1]], p), np.array(krylov, dtype=a.dtype).T.reshape(d, k)
        pc = int(nz[0])
        inv = pow(int(r[pc]), -1, p)
        reduced.append((pc, (r * inv) % p, (combo * inv) % p))
        krylov.append(w)
        w = _kernels.matmul_mod(a, w.reshape(-1, 1), p)[:, 0]


def _min_poly_array(a: np.ndarray, p: int) -> Poly:
    d = a.shape[0]
    mu = Poly.one(p)
    for i in range(d):
        e = np.zeros(d, dtype=a.dtype)
        e[i] = 1
        f, _ = _spin(a, e, p)
        mu = poly_lcm(mu, f)
        if mu.degree == d:
            break
    return mu


def min_poly(m: MatrixFp) -> Poly:
    """Least common multiple of the local minimal polynomials of the basis vectors."""
    return _min_poly_array(m.a, m.p)


def companion(f: Poly) -> MatrixFp:
    """Ones on the subdiagonal, negated low coefficients in the last column."""
    if f.degree < 1 or not f.is_monic():
        raise InvalidInput("companion matrix needs a monic polynomial of degree >= 1")
    d, p = f.degree, f.p
    out = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        out[i, i - 1] = 1
    for i in range(d):
        out[i, d - 1] = (-f[i]) % p
    return MatrixFp(out, p)


def companion_poly(m: MatrixFp) -> Poly | None:
    """The polynomial whose companion matrix is ``m``, or None."""
    d, a = m.dim, m.a
    if d > 1:
        expected = np.zeros((d, d - 1), dtype=np.int64)
        expected[1:, :] = np.eye(d - 1, dtype=np.int64)
        if not np.array_equal(a[:, : d - 1], expected):
            return None
    return Poly([(-int(a[i, d - 1])) % m.p for i in range(d)] + [1], m.p)


# ---------------------------------------------------------------------------
# Frobenius normal form


@dataclass(frozen=True)
class FrobeniusForm:
    blocks: tuple[Poly, ...]
    transform: MatrixFp

    def block_matrix(self) -> MatrixFp:
        return block_diag([companion(f) for f in self.blocks])


_MAXVEC_TRIES = 256


def _max_vector(a: np.ndarray, p: int, mu: Poly) -> tuple[Poly, np.ndarray]:
    d = a.shape[0]
    for i in range(d):
        e = np.zeros(d, dtype=a.dtype)
        e[i] = 1
        f, k = _spin(a, e, p)
        if f.degree == mu.degree:
            return f, k
    # fixed seed keeps the form a deterministic function of the matrix
    rng = np.random.Generator(np.random.PCG64(0x5EED))
    for _ in range(_MAXVEC_TRIES):
        v = np.array([int(x) for x in rng.integers(0, p, size=d)], dtype=a.dtype)
        f, k = _spin(a, v, p)
        if f.degree == mu.degree:
            return f, k
    raise CapExceededError("no vector with maximal local minimal polynomial found")


def _decompose(a: np.ndarray, p: int) -> list[tuple[Poly, np.ndarray]]:
    """Cyclic decomposition, largest invariant factor first; vectors in a's coordinates."""
    r = a.shape[0]
    if r == 0:
        return []
    mu = _min_poly_array(a, p)
    f, kry = _max_vector(a, p, mu)
    k = f.degree
    if k == r:
        return [(f, kry)]
    # functional vanishing on v..A^(k-2)v and equal to 1 on A^(k-1)v
    target = np.zeros(k, dtype=a.dtype)
    target[k - 1] = 1
    func = _linalg.solve(kry.T.copy(), target, p)
    rows = [func]
    for _ in range(k - 1):
        rows.append(_kernels.matmul_mod(rows[-1].reshape(1, -1), a, p)[0])
    u = _linalg.nullspace(np.array(rows, dtype=a.dtype), p)
    au = _kernels.matmul_mod(a, u, p)
    restricted = _linalg.solve(u, au, p)
    rest = _decompose(restricted, p)
    mapped = [(g, _kernels.matmul_mod(u, vecs, p)) for g, vecs in rest]
    return [(f, kry)] + mapped


def frobenius_normal_form(m: MatrixFp) -> FrobeniusForm:
    """Invariant factors (each dividing the next) and P with P^-1 M P block-companion."""
    parts = _decompose(m.a, m.p)[::-1]
    blocks = tuple(f for f, _ in parts)
    transform = np.concatenate([vecs for _, vecs in parts], axis=1)
    return FrobeniusForm(blocks, MatrixFp(transform, m.p))


# ---------------------------------------------------------------------------
# exponentiation


def mat_pow_naive(m: MatrixFp, e: int) -> MatrixFp:
    """Square-and-multiply on whole matrices: O(log e) products."""
    if e < 0:
        return mat_pow_naive(m.inverse(), -e)
    return MatrixFp._wrap(_kernels.matpow_bits(m.a, _kernels.exponent_bits(e), m.p), m.p)


def multiplication_matrix(g: Poly, f: Poly) -> np.ndarray:
    """Matrix of u -> g*u on F_p[t]/f in the basis 1, t, ..., t^(d-1).

    For the companion matrix C of f this equals g(C).
    """
    d, p = f.degree, f.p
    out = np.zeros((d, d), dtype=_linalg.dtype_for(p))
    col = g % f
    x = Poly.x(p)
    for j in range(d):
        for i, c in enumerate(col.coeffs):
            out[i, j] = c
        if j + 1 < d:
            col = col * x % f
    return out


def mat_pow_lg(m: MatrixFp, e: int) -> MatrixFp:
    """M**e through the Frobenius form and t**e mod the minimal polynomial."""
    if e < 0:
        raise InvalidInput("negative exponent")
    f = companion_poly(m)
    if f is not None:
        if f[0] == 0:
            raise InvalidInput("matrix is singular")
        return MatrixFp._wrap(multiplication_matrix(poly_powmod(Poly.x(m.p), e, f), f), m.p)
    if m.det() == 0:
        raise InvalidInput("matrix is singular")
    form = frobenius_normal_form(m)
    mu = form.blocks[-1]
    ell = poly_powmod(Poly.x(m.p), e, mu)
    c = block_diag([MatrixFp._wrap(multiplication_matrix(ell, g), m.p) for g in form.blocks])
    return form.transform @ c @ form.transform.inverse()


# ---------------------------------------------------------------------------
# invariant subspaces and orders


def invariant_subspace_search(m: MatrixFp) -> np.ndarray | None:
    """Exhaustive search for a proper nonzero M-invariant subspace.

    Every minimal nonzero invariant subspace is cyclic, so it is enough to look
    for a nonzero v whose Krylov space span{v, Mv, ...} is not everything.
    Returns a basis (rows) of such a space, or None if M acts irreducibly.
    """
    p, d = m.p, m.dim
    if p**d > SUBSPACE_SEARCH_CAP:
        raise CapExceededError(f"search space p^d = {p}^{d} exceeds {SUBSPACE_SEARCH_CAP}")
    if d == 1:
        return None
    v = _kernels.find_short_cycle(m.a, p)
    if v is None:
        return None
    _, basis = _spin(m.a, np.asarray(v, dtype=np.int64), p)
    return basis.T.copy()


def _order_multiple(mu: Poly) -> FactoredInteger:
    """A multiple of the order of t in the unit group of F_p[t]/mu."""
    p, d = mu.p, mu.degree
    parts = [factor_integer(p**k - 1) for k in range(1, d + 1)]
    s, q = 0, 1
    while q < d:
        q *= p
        s += 1
    if s:
        parts.append(FactoredInteger(p**s, ((p, s),)))
    return factor_lcm(parts)


def matrix_order(m: MatrixFp) -> int:
    """Least k >= 1 with M**k = I."""
    p, d = m.p, m.dim
    if p**d > ORDER_CAP:
        raise CapExceededError(f"p^d = {p}^{d} exceeds the order cap 2^40")
    chi = char_poly(m)
    if chi[0] == 0:
        raise InvalidInput("matrix is singular")
    if is_irreducible(chi):
        field = ExtField(chi, check=False)
        return mult_order(field.gen(), factor_integer(p**d - 1))
    mu = min_poly(m)
    t = _ResidueT(mu)
    return order_from_multiple(t, _ResidueT(mu, one=True), _order_multiple(mu))


class _ResidueT:
    """t (or 1) in the ring F_p[t]/mu, supporting ** and == only."""

    __slots__ = ("rep", "mu")

    def __init__(self, mu: Poly, one: bool = False, rep: Poly | None = None):
        self.mu = mu
        if rep is None:
            rep = (Poly.one(mu.p) if one else Poly.x(mu.p)) % mu
        self.rep = rep

    def __pow__(self, k: int) -> "_ResidueT":
        return _ResidueT(self.mu, rep=poly_powmod(self.rep, k, self.mu))

    def __eq__(self, other):
        return self.rep == other.rep


def is_unipotent(m: MatrixFp) -> bool:
    n = m - MatrixFp.identity(m.dim, m.p)
    return mat_pow_naive(n, m.dim).is_zero() if m.dim else True


def random_invertible(d: int, p: int, rng: np.random.Generator) -> MatrixFp:
    while True:
        m = MatrixFp(rng.integers(0, p, size=(d, d)), p)
        if m.det():
            return m


__all__ = [
    "FrobeniusForm",
    "MatrixFp",
    "block_diag",
    "char_poly",
    "companion",
    "companion_poly",
    "eval_poly_at_matrix",
    "frobenius_normal_form",
    "invariant_subspace_search",
    "is_unipotent",
    "mat_arith",
    "mat_pow_lg",
    "mat_pow_naive",
    "matrix_order",
    "min_poly",
    "multiplication_matrix",
    "poly_gcd",
    "random_invertible",
]
