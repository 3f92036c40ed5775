"""Discrete-logarithm solvers and the structural attacks on MOR keys.

Generic solvers work on any element type supporting ``*``, ``**``, ``==`` and
hashing (:class:`FpElem`, :class:`ExtFieldElem`).  The structural attacks
reduce a MOR logarithm to one of them:

* Menezes-Wu: a matrix with irreducible characteristic polynomial acts like
  its eigenvalue in F_{p^d}.
* Unipotent: powers of I + N are polynomials in m with binomial coefficients.
* Central: a central automorphism only moves the z-exponents, linearly in m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import _linalg
from .algebra import (
    ExtField,
    FactoredInteger,
    FpElem,
    Poly,
    factor_integer,
    is_irreducible,
    mult_order,
)
from .aut import EsAut, is_inner
from .errors import CapExceededError, InvalidInput, NoSolutionError
from .matrix import MatrixFp, char_poly, is_unipotent, mat_pow_lg, mat_pow_naive

BSGS_CAP = 1 << 40


@dataclass(frozen=True)
class DlogInstance:
    g: Any
    h: Any
    order: FactoredInteger


@dataclass(frozen=True)
class DlogAnswer:
    """m is congruent to ``residue`` modulo ``modulus``."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise InvalidInput("residue must lie in [0, modulus)")

    def __str__(self):
        return f"m ≡ {self.residue} (mod {self.modulus})"


def _one(g):
    return g ** 0


def bsgs(inst: DlogInstance) -> DlogAnswer:
    """Least m in [0, n) with g^m = h, by a baby-step table of size ceil(sqrt(n))."""
    n = inst.order.value
    if n > BSGS_CAP:
        raise CapExceededError(f"group order {n} exceeds the BSGS cap 2^40")
    g, h = inst.g, inst.h
    s = math.isqrt(n - 1) + 1 if n > 1 else 1
    table: dict = {}
    e = _one(g)
    for j in range(s):
        table.setdefault(e, j)
        e = e * g
    giant = g ** (n - s % n) if s % n else _one(g)  # g^-s
    y = h
    for i in range(s):
        j = table.get(y)
        if j is not None:
            return DlogAnswer((i * s + j) % n, n)
        y = y * giant
    raise NoSolutionError("target is not a power of the base")


def _crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    x, mod = 0, 1
    for r, m in residues:
        t = (r - x) * pow(mod, -1, m) % m
        x += mod * t
        mod *= m
    return x % mod, mod


def pohlig_hellman(inst: DlogInstance) -> DlogAnswer:
    """Solve modulo each prime power q^e digit by digit, then combine by CRT."""
    n = inst.order.value
    g, h = inst.g, inst.h
    one = _one(g)
    parts = []
    for q, e in inst.order.factors:
        cof = n // q**e
        gq, hq = g**cof, h**cof
        gamma = gq ** (q ** (e - 1))
        sub = FactoredInteger(q, ((q, 1),))
        x = 0
        ginv = gq ** (q**e - 1)
        for k in range(e):
            hk = (ginv**x * hq) ** (q ** (e - 1 - k))
            d = bsgs(DlogInstance(gamma, hk, sub)).residue if gamma != one else _zero_digit(hk, one)
            x += d * q**k
        parts.append((x, q**e))
    m, mod = _crt(parts)
    if g**m != h:
        raise NoSolutionError("target is not a power of the base")
    return DlogAnswer(m, mod)


def _zero_digit(hk, one) -> int:
    if hk != one:
        raise NoSolutionError("target is not a power of the base")
    return 0


def fp_instance(g: int, h: int, p: int) -> DlogInstance:
    """DlogInstance in F_p^* with the exact order of g."""
    gg = FpElem(g, p)
    if gg.value == 0 or FpElem(h, p).value == 0:
        raise InvalidInput("0 is not in the multiplicative group")
    parent = factor_integer(p - 1)
    return DlogInstance(gg, FpElem(h, p), parent.divisor(mult_order(gg, parent)))


# ---------------------------------------------------------------------------
# matrices


def _polynomial_in(g: MatrixFp, h: MatrixFp) -> Poly:
    """The polynomial l of degree < d with h = l(g), using the cyclic vector e_1."""
    p, d = g.p, g.dim
    e1 = np.zeros(d, dtype=g.a.dtype)
    e1[0] = 1
    cols = [e1]
    for _ in range(d - 1):
        cols.append(g.apply(cols[-1]))
    krylov = np.array(cols, dtype=g.a.dtype).T
    try:
        coeffs = _linalg.solve(krylov, h.a[:, 0].copy(), p)
    except InvalidInput as exc:
        raise NoSolutionError("h is not a polynomial in g") from exc
    return Poly([int(c) for c in coeffs], p)


def menezes_wu_dlog(g: MatrixFp, h: MatrixFp) -> DlogAnswer:
    """Matrix DLP with irreducible char poly, moved into F_p[t]/chi_g.

    alpha = t is an eigenvalue of g.  The matching eigenvalue of h is l(alpha)
    where h = l(g); each Frobenius conjugate of it is tried until the
    logarithm re-exponentiates to h.
    """
    if g.p != h.p or g.dim != h.dim:
        raise InvalidInput("g and h must share dimension and modulus")
    p, d = g.p, g.dim
    chi = char_poly(g)
    if not is_irreducible(chi):
        raise InvalidInput(f"characteristic polynomial {chi} is reducible; only the irreducible case is supported")
    field = ExtField(chi, check=False)
    alpha = field.gen()
    parent = factor_integer(p**d - 1)
    order = parent.divisor(mult_order(alpha, parent))
    beta = field(_polynomial_in(g, h))
    if not char_poly(h)(beta).is_zero():
        raise NoSolutionError("chi_h has no root matching g; h is not a power of g")
    conj = beta
    for _ in range(d):
        try:
            ans = pohlig_hellman(DlogInstance(alpha, conj, order))
        except NoSolutionError:
            ans = None
        if ans is not None and mat_pow_lg(g, ans.residue) == h:
            return ans
        conj = conj ** p
    raise NoSolutionError("no Frobenius conjugate yields a consistent logarithm")


def _nilpotency_index(n: MatrixFp) -> int:
    k, power = 1, n
    while not power.is_zero():
        power = power @ n
        k += 1
        if k > n.dim + 1:
            raise InvalidInput("matrix is not nilpotent")
    return k


def unipotent_dlog(u: MatrixFp, h: MatrixFp) -> DlogAnswer:
    """Recover m mod ord(u) from h = u^m with u unipotent.

    With N = u - I nilpotent of index k, u^m = sum_{j<k} C(m, j) N^j and the
    N^j are linearly independent, so the binomial coefficients mod p can be
    read off.  By Lucas' theorem C(m, p^i) is the i-th base-p digit of m.
    """
    if u.p != h.p or u.dim != h.dim:
        raise InvalidInput("u and h must share dimension and modulus")
    p, d = u.p, u.dim
    if not is_unipotent(u):
        raise InvalidInput("u is not unipotent")
    eye = MatrixFp.identity(d, p)
    nil = u - eye
    k = _nilpotency_index(nil)
    s, order = 0, 1
    while order < k:
        order *= p
        s += 1
    if order == 1:
        if h != eye:
            raise NoSolutionError("h is not a power of the identity")
        return DlogAnswer(0, 1)
    powers = [eye]
    for _ in range(1, k):
        powers.append(powers[-1] @ nil)
    system = np.array([pw.a.ravel() for pw in powers], dtype=u.a.dtype).T
    try:
        coeffs = _linalg.solve(system, h.a.ravel().copy(), p)
    except InvalidInput as exc:
        raise NoSolutionError("h is not a power of u") from exc
    m = sum(int(coeffs[p**i]) * p**i for i in range(s))
    if mat_pow_naive(u, m) != h:
        raise NoSolutionError("h is not a power of u")
    return DlogAnswer(m, order)


def central_aut_attack(pub) -> DlogAnswer:
    """m mod p from the offsets of a central key: phi^m shifts by m times phi's offsets."""
    phi, phi_m = pub.phi, pub.phi_m
    if not isinstance(phi, EsAut) or not is_inner(phi):
        raise InvalidInput("not central: public automorphism acts nontrivially on G/Z or Z")
    if not isinstance(phi_m, EsAut) or not is_inner(phi_m):
        raise NoSolutionError("phi^m is not central, so it is not a power of phi")
    p = phi.params.p
    v, w = phi.v, phi_m.v
    i = next((i for i, x in enumerate(v) if x), None)
    if i is None:
        raise InvalidInput("identity key: all offsets are zero")
    m = w[i] * pow(v[i], -1, p) % p
    for vi, wi in zip(v, w):
        if m * vi % p != wi:
            raise NoSolutionError("offsets are inconsistent with any power of phi")
    return DlogAnswer(m, p)
