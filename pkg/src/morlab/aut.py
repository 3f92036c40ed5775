"""Automorphisms of the extra-special group.

An automorphism is stored as ``(M, v, zeta)``: column i of M is the image of
the i-th generator in G/Z (x_1..x_n, then y_1..y_n), ``v[i]`` is the z-exponent
attached to that image, and ``phi(z) = z^zeta``.  Such a triple extends to an
automorphism exactly when M^T J M = zeta J.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ._rng import rand_below
from .algebra import FpElem, factor_integer, is_irreducible, mult_order
from .errors import CapExceededError, InvalidInput
from .matrix import MatrixFp, char_poly, matrix_order
from .pgroup import EsElement, EsParams, es_mul, es_pow, symplectic_form

SAMPLE_CAP = 10**5


class EsAut:
    __slots__ = ("M", "v", "zeta", "params", "_images")

    def __init__(self, M: MatrixFp, v: Sequence[int], zeta: int, params: EsParams):
        p = params.p
        self.M = M
        self.v = tuple(int(x) % p for x in v)
        self.zeta = int(zeta) % p
        self.params = params
        self._images = None

    @property
    def images(self) -> list[EsElement]:
        """phi(x_1), ..., phi(x_n), phi(y_1), ..., phi(y_n)."""
        if self._images is None:
            cols = self.M.a.T
            self._images = [self.params.from_vector([int(x) for x in col], c) for col, c in zip(cols, self.v)]
        return self._images

    def __call__(self, g: EsElement) -> EsElement:
        return aut_apply(self, g)

    def __eq__(self, other):
        if not isinstance(other, EsAut):
            return NotImplemented
        return self.params == other.params and self.zeta == other.zeta and self.v == other.v and self.M == other.M

    def __hash__(self):
        return hash((self.params, self.zeta, self.v, hash(self.M)))

    def __repr__(self):
        return f"EsAut(M={self.M.rows()}, v={list(self.v)}, zeta={self.zeta}, p={self.params.p})"


def identity_aut(params: EsParams) -> EsAut:
    return EsAut(MatrixFp.identity(2 * params.n, params.p), (0,) * (2 * params.n), 1, params)


def similitude_ok(M: MatrixFp, zeta: int, n: int) -> bool:
    p = M.p
    j = MatrixFp(symplectic_form(n, p), p)
    return M.transpose() @ j @ M == j.scale(zeta)


def aut_validate(M, v, zeta, params: EsParams) -> EsAut:
    """Build an automorphism after checking that the triple really defines one."""
    p, n = params.p, params.n
    if not isinstance(M, MatrixFp):
        M = MatrixFp(M, p)
    if M.p != p or M.dim != 2 * n:
        raise InvalidInput(f"matrix must be {2 * n}x{2 * n} over F_{p}")
    if len(v) != 2 * n:
        raise InvalidInput(f"offset vector must have length {2 * n}")
    if int(zeta) % p == 0:
        raise InvalidInput("zeta must be nonzero")
    if M.det() == 0:
        raise InvalidInput("matrix is singular")
    if not similitude_ok(M, int(zeta), n):
        raise InvalidInput("invalid automorphism: similitude check M^T J M = zeta J fails")
    return EsAut(M, v, zeta, params)


def _check_params(*auts) -> None:
    ps = {a.params for a in auts}
    if len(ps) != 1:
        raise InvalidInput(f"automorphisms of different groups: {ps}")


def aut_apply(phi: EsAut, g: EsElement) -> EsElement:
    """phi(x^a y^b z^c) = prod phi(x_i)^a_i * prod phi(y_i)^b_i * z^(zeta c), left to right."""
    if g.params != phi.params:
        raise InvalidInput("element and automorphism belong to different groups")
    params = phi.params
    out = params.identity()
    for img, k in zip(phi.images, g.a + g.b):
        if k:
            out = es_mul(out, es_pow(img, k))
    if g.c:
        out = es_mul(out, params.element((0,) * params.n, (0,) * params.n, phi.zeta * g.c))
    return out


def aut_compose(phi2: EsAut, phi1: EsAut) -> EsAut:
    """phi2 o phi1; the offsets are read off by evaluating on each generator."""
    _check_params(phi2, phi1)
    v = [aut_apply(phi2, img).c for img in phi1.images]
    return EsAut(phi2.M @ phi1.M, v, phi2.zeta * phi1.zeta, phi1.params)


def aut_pow(phi: EsAut, k: int) -> EsAut:
    if k < 0:
        raise InvalidInput("negative exponent; use aut_inverse")
    result = identity_aut(phi.params)
    for bit in bin(k)[2:] if k else "":
        result = aut_compose(result, result)
        if bit == "1":
            result = aut_compose(result, phi)
    return result


def aut_inverse(phi: EsAut) -> EsAut:
    params = phi.params
    p = params.p
    minv = phi.M.inverse()
    zinv = pow(phi.zeta, -1, p)
    v = []
    for col in minv.a.T:
        cand = params.from_vector([int(x) for x in col])
        # phi(cand) = g_i z^s; choose w with s + zeta w = 0
        s = aut_apply(phi, cand).c
        v.append(-s * zinv % p)
    return EsAut(minv, v, zinv, params)


def aut_order(phi: EsAut) -> int:
    """lcm(ord M, ord zeta), times p when the residual central part is nontrivial."""
    p = phi.params.p
    if is_inner(phi):
        # central maps scale their offsets linearly, so the order is 1 or p
        return p if any(phi.v) else 1
    t1 = matrix_order(phi.M)
    if phi.zeta != 1:
        zo = mult_order(FpElem(phi.zeta, p), factor_integer(p - 1))
        t1 = t1 * zo // math.gcd(t1, zo)
    return t1 if aut_pow(phi, t1) == identity_aut(phi.params) else p * t1


def make_central_aut(v: Sequence[int], params: EsParams) -> EsAut:
    """x_i -> x_i z^v_i, y_i -> y_i z^v_(n+i)."""
    if len(v) != 2 * params.n:
        raise InvalidInput(f"offset vector must have length {2 * params.n}")
    return EsAut(MatrixFp.identity(2 * params.n, params.p), v, 1, params)


def is_inner(phi: EsAut) -> bool:
    return phi.zeta == 1 and phi.M.is_identity()


def transvection(u: Sequence[int], lam: int, p: int) -> MatrixFp:
    """x -> x + lam B(x, u) u, which preserves the form B."""
    u = np.asarray(u, dtype=np.int64 if p < 1 << 31 else object).reshape(-1, 1)
    n = len(u) // 2
    ju = symplectic_form(n, p) @ u
    eye = np.eye(len(u), dtype=np.int64).astype(u.dtype)
    return MatrixFp((eye + (int(lam) % p) * (u @ ju.T)) % p, p)


def random_symplectic(params: EsParams, rng: np.random.Generator, steps: int | None = None) -> MatrixFp:
    p, dim = params.p, 2 * params.n
    steps = steps or 2 * dim + 1
    m = MatrixFp.identity(dim, p)
    for _ in range(steps):
        u = [rand_below(rng, p) for _ in range(dim)]
        if not any(u):
            continue
        m = transvection(u, 1 + rand_below(rng, p - 1), p) @ m
    return m


def sample_symplectic_irreducible(params: EsParams, rng: np.random.Generator) -> EsAut:
    """Random M in Sp(2n, p) with irreducible characteristic polynomial, random offsets, zeta = 1."""
    p, dim = params.p, 2 * params.n
    for _ in range(SAMPLE_CAP):
        m = random_symplectic(params, rng)
        if is_irreducible(char_poly(m)):
            v = [rand_below(rng, p) for _ in range(dim)]
            return EsAut(m, v, 1, params)
    raise CapExceededError(f"no irreducible symplectic matrix in {SAMPLE_CAP} draws")


def images_to_aut(images: Sequence[EsElement], z_image: EsElement, params: EsParams) -> EsAut:
    """Assemble and validate an automorphism from generator images."""
    if any(z_image.a) or any(z_image.b):
        raise InvalidInput("z must map into the center")
    cols = [img.vector() for img in images]
    M = MatrixFp(np.array(cols, dtype=np.int64 if params.p < 1 << 31 else object).T, params.p)
    return aut_validate(M, [img.c for img in images], z_image.c, params)


__all__ = [
    "EsAut",
    "aut_apply",
    "aut_compose",
    "aut_inverse",
    "aut_order",
    "aut_pow",
    "aut_validate",
    "identity_aut",
    "images_to_aut",
    "is_inner",
    "make_central_aut",
    "random_symplectic",
    "sample_symplectic_irreducible",
    "similitude_ok",
    "transvection",
]
