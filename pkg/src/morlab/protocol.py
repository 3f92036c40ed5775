"""The MOR cryptosystem on two platforms, plus textbook ElGamal in F_p^*.

Textbook constructions for experiments only: no padding, no hybrid layer, no
semantic-security hardening.  Do not use them to protect real data.

A platform bundles the group the messages live in with the arithmetic of its
automorphisms:

* :class:`ExtraSpecialPlatform` -- the extra-special group of order p^(2n+1),
  automorphisms as :class:`~morlab.aut.EsAut`;
* :class:`ElementaryPlatform` -- F_p^d, automorphisms as invertible matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from ._rng import rand_below, rand_range
from .algebra import FpElem, check_prime, factor_integer, mult_order, random_irreducible
from .aut import (
    EsAut,
    aut_apply,
    aut_compose,
    aut_inverse,
    aut_order,
    aut_pow,
    aut_validate,
    identity_aut,
    images_to_aut,
    make_central_aut,
    sample_symplectic_irreducible,
)
from .errors import CapExceededError, InvalidInput
from .matrix import MatrixFp, companion, mat_pow_lg, matrix_order, random_invertible
from .pgroup import EsElement, EsParams

KEYGEN_RETRIES = 1000

Aut = Union[EsAut, MatrixFp]
Element = Union[EsElement, tuple]


@dataclass(frozen=True)
class ExtraSpecialPlatform:
    p: int
    n: int
    name = "extraspecial"

    def __post_init__(self):
        EsParams(self.p, self.n)

    @property
    def params(self) -> EsParams:
        return EsParams(self.p, self.n)

    @property
    def capacity(self) -> int:
        return self.p ** (2 * self.n + 1)

    def identity_aut(self) -> EsAut:
        return identity_aut(self.params)

    def compose(self, f: EsAut, g: EsAut) -> EsAut:
        return aut_compose(f, g)

    def power(self, f: EsAut, k: int) -> EsAut:
        return aut_pow(f, k)

    def inverse(self, f: EsAut) -> EsAut:
        return aut_inverse(f)

    def apply(self, f: EsAut, x: EsElement) -> EsElement:
        return aut_apply(f, x)

    def order(self, f: EsAut) -> int:
        return aut_order(f)

    def validate(self, f) -> EsAut:
        if not isinstance(f, EsAut) or f.params != self.params:
            raise InvalidInput("automorphism does not belong to this platform")
        return aut_validate(f.M, f.v, f.zeta, self.params)

    def check_element(self, x) -> EsElement:
        if not isinstance(x, EsElement) or x.params != self.params:
            raise InvalidInput("element does not belong to this platform")
        return x

    def identity_element(self) -> EsElement:
        return self.params.identity()

    def generators(self) -> list[EsElement]:
        """Generators whose images determine an automorphism: x's, y's, then z."""
        return self.params.generators() + [self.params.z()]

    def from_images(self, images: Sequence[EsElement]) -> EsAut:
        return images_to_aut(images[:-1], images[-1], self.params)

    def to_digits(self, x: EsElement) -> tuple[int, ...]:
        return x.digits()

    def from_digits(self, digits: Sequence[int]) -> EsElement:
        n = self.n
        return self.params.element(digits[:n], digits[n : 2 * n], digits[2 * n])

    def random_element(self, rng) -> EsElement:
        return self.params.random(rng)

    def sample_phi(self, rng, kind: str = "irreducible") -> EsAut:
        if kind == "irreducible":
            return sample_symplectic_irreducible(self.params, rng)
        if kind == "central":
            while True:
                v = [rand_below(rng, self.p) for _ in range(2 * self.n)]
                if any(v):
                    return make_central_aut(v, self.params)
        raise InvalidInput(f"key kind {kind!r} is not available on the extra-special platform")


@dataclass(frozen=True)
class ElementaryPlatform:
    p: int
    d: int
    name = "elementary"

    def __post_init__(self):
        check_prime(self.p)
        if self.d < 1:
            raise InvalidInput("d must be positive")

    @property
    def capacity(self) -> int:
        return self.p**self.d

    def identity_aut(self) -> MatrixFp:
        return MatrixFp.identity(self.d, self.p)

    def compose(self, f: MatrixFp, g: MatrixFp) -> MatrixFp:
        return f @ g

    def power(self, f: MatrixFp, k: int) -> MatrixFp:
        return mat_pow_lg(f, k)

    def inverse(self, f: MatrixFp) -> MatrixFp:
        return f.inverse()

    def apply(self, f: MatrixFp, x: tuple) -> tuple:
        return tuple(int(c) for c in f.apply(x))

    def order(self, f: MatrixFp) -> int:
        return matrix_order(f)

    def validate(self, f) -> MatrixFp:
        if not isinstance(f, MatrixFp) or f.p != self.p or f.dim != self.d:
            raise InvalidInput("automorphism does not belong to this platform")
        if f.det() == 0:
            raise InvalidInput("invalid automorphism: matrix is singular")
        return f

    def check_element(self, x) -> tuple:
        if not isinstance(x, tuple) or len(x) != self.d or any(not 0 <= c < self.p for c in x):
            raise InvalidInput("element does not belong to this platform")
        return x

    def identity_element(self) -> tuple:
        return (0,) * self.d

    def generators(self) -> list[tuple]:
        return [tuple(1 if j == i else 0 for j in range(self.d)) for i in range(self.d)]

    def from_images(self, images: Sequence[tuple]) -> MatrixFp:
        return self.validate(MatrixFp(np.array(images, dtype=object).T, self.p))

    def to_digits(self, x: tuple) -> tuple[int, ...]:
        return x

    def from_digits(self, digits: Sequence[int]) -> tuple:
        return tuple(int(c) % self.p for c in digits)

    def random_element(self, rng) -> tuple:
        return tuple(rand_below(rng, self.p) for _ in range(self.d))

    def sample_phi(self, rng, kind: str = "irreducible") -> MatrixFp:
        if kind == "irreducible":
            return companion(random_irreducible(self.d, self.p, rng))
        if kind == "unipotent":
            if self.d < 2:
                raise InvalidInput("unipotent keys need d >= 2")
            while True:
                u = np.eye(self.d, dtype=np.int64)
                for i in range(self.d):
                    for j in range(i + 1, self.d):
                        u[i, j] = rand_below(rng, self.p)
                q = random_invertible(self.d, self.p, rng)
                m = q @ MatrixFp(u, self.p) @ q.inverse()
                if not m.is_identity():
                    return m
        raise InvalidInput(f"key kind {kind!r} is not available on the elementary platform")


Platform = Union[ExtraSpecialPlatform, ElementaryPlatform]


def platform_of(phi: Aut) -> Platform:
    if isinstance(phi, EsAut):
        return ExtraSpecialPlatform(phi.params.p, phi.params.n)
    if isinstance(phi, MatrixFp):
        return ElementaryPlatform(phi.p, phi.dim)
    raise TypeError(f"not an automorphism: {type(phi).__name__}")


# ---------------------------------------------------------------------------
# MOR


@dataclass(frozen=True, eq=False)
class MorPublicKey:
    platform: Platform
    phi: Aut
    phi_m: Aut
    _order: list = field(default_factory=list, repr=False, compare=False)

    def order(self) -> int:
        """Order of phi; public information, cached after the first call."""
        if not self._order:
            self._order.append(self.platform.order(self.phi))
        return self._order[0]

    def __eq__(self, other):
        if not isinstance(other, MorPublicKey):
            return NotImplemented
        return self.platform == other.platform and self.phi == other.phi and self.phi_m == other.phi_m


@dataclass(frozen=True)
class MorPrivateKey:
    platform: Platform
    m: int
    order_phi: int
    phi: Aut

    def __post_init__(self):
        if not 0 <= self.m < self.order_phi:
            raise InvalidInput(f"private exponent must lie in [0, {self.order_phi})")


@dataclass(frozen=True)
class MorCiphertext:
    platform: Platform
    phi_r: Aut
    payload: Element


def mor_keygen(platform: Platform, rng: np.random.Generator, *, kind: str = "irreducible", m: int | None = None):
    """Sample phi, its order and m in [2, order-1]; publish (phi, phi^m).

    ``m`` forces the private exponent (test hook).  Irreducible keys whose
    order is at most 3 are resampled.
    """
    for _ in range(KEYGEN_RETRIES):
        phi = platform.sample_phi(rng, kind)
        order = platform.order(phi)
        if order <= 3 and kind == "irreducible" and m is None:
            continue
        if m is None:
            if order < 3:
                continue
            exp = rand_range(rng, 2, order - 1)
        else:
            exp = m % order
        pub = MorPublicKey(platform, phi, platform.power(phi, exp))
        pub._order.append(order)
        return pub, MorPrivateKey(platform, exp, order, phi)
    raise CapExceededError(f"no usable key after {KEYGEN_RETRIES} attempts")


def mor_encrypt(pub: MorPublicKey, a: Element, rng: np.random.Generator, *, r: int | None = None) -> MorCiphertext:
    """(phi^r, (phi^m)^r (a)) with r uniform in [2, order-1] unless given."""
    platform = pub.platform
    platform.check_element(a)
    if r is None:
        order = pub.order()
        r = rand_range(rng, 2, order - 1) if order > 2 else 1
    phi_r = platform.power(pub.phi, r)
    payload = platform.apply(platform.power(pub.phi_m, r), a)
    return MorCiphertext(platform, phi_r, payload)


def mor_decrypt(priv: MorPrivateKey, ct: MorCiphertext, *, method: str = "inverse") -> Element:
    """Recover a by applying phi^(-mr) to the payload.

    ``method="inverse"`` inverts (phi^r)^m directly; ``method="exponent"`` uses
    (phi^r)^(order - m), which is the same map because phi^order = 1.
    """
    platform = priv.platform
    if ct.platform != platform:
        raise InvalidInput("ciphertext platform does not match the key")
    phi_r = platform.validate(ct.phi_r)
    platform.check_element(ct.payload)
    if method == "inverse":
        undo = platform.inverse(platform.power(phi_r, priv.m))
    elif method == "exponent":
        undo = platform.power(phi_r, (priv.order_phi - priv.m) % priv.order_phi)
    else:
        raise ValueError(f"unknown decryption method {method!r}")
    return platform.apply(undo, ct.payload)


DecryptionOracle = Callable[[MorPublicKey, MorCiphertext], Element]


def dh_from_decryption_oracle(phi_m1: Aut, phi_m2: Aut, oracle: DecryptionOracle, *, phi: Aut | None = None) -> Aut:
    """Compute phi^(m' m'') from phi^m' and phi^m'' with a decryption oracle.

    The oracle is asked to decrypt (phi^m'', g) under the public key whose
    second component is phi^m'; it answers phi^(-m' m'')(g).  Doing this for
    every generator g pins down phi^(-m' m''), which is then inverted.
    """
    platform = platform_of(phi_m1)
    if platform_of(phi_m2) != platform:
        raise InvalidInput("both inputs must live on the same platform")
    pub = MorPublicKey(platform, phi if phi is not None else phi_m1, phi_m1)
    images = [oracle(pub, MorCiphertext(platform, phi_m2, g)) for g in platform.generators()]
    undo = platform.from_images(images)
    return platform.inverse(undo)


# ---------------------------------------------------------------------------
# message encoding


def encode_message(data: bytes, platform: Platform) -> Element:
    """Big-endian integer of ``data`` written in base p, least significant digit first."""
    value = int.from_bytes(data, "big")
    if value >= platform.capacity:
        raise InvalidInput(f"message too large for platform (needs < {platform.capacity})")
    p = platform.p
    digits = []
    for _ in range(_digit_count(platform)):
        digits.append(value % p)
        value //= p
    return platform.from_digits(digits)


def decode_message(x: Element, platform: Platform) -> bytes:
    value = 0
    for c in reversed(platform.to_digits(x)):
        value = value * platform.p + int(c)
    return value.to_bytes((value.bit_length() + 7) // 8, "big")


def _digit_count(platform: Platform) -> int:
    return 2 * platform.n + 1 if isinstance(platform, ExtraSpecialPlatform) else platform.d


# ---------------------------------------------------------------------------
# ElGamal in F_p^*


@dataclass(frozen=True)
class ElGamalPublicKey:
    p: int
    g: int
    h: int


@dataclass(frozen=True)
class ElGamalPrivateKey:
    p: int
    g: int
    m: int


def elgamal_keygen(p: int, g: int, rng: np.random.Generator, *, m: int | None = None):
    p = check_prime(p)
    order = mult_order(FpElem(g, p), factor_integer(p - 1)) if g % p else 0
    if order <= 1:
        raise InvalidInput("generator must have order > 1")
    if m is None:
        m = rand_range(rng, 2, order - 1) if order > 2 else 1
    return ElGamalPublicKey(p, g % p, pow(g, m, p)), ElGamalPrivateKey(p, g % p, m)


def elgamal_encrypt(pub: ElGamalPublicKey, a: int, rng: np.random.Generator, *, r: int | None = None) -> tuple[int, int]:
    """(g^r, h^r a) = (g^r, g^(mr) a)."""
    if a % pub.p == 0:
        raise InvalidInput("message must be a nonzero residue")
    if r is None:
        r = rand_range(rng, 2, pub.p - 2)
    return pow(pub.g, r, pub.p), pow(pub.h, r, pub.p) * a % pub.p


def elgamal_decrypt(priv: ElGamalPrivateKey, ct: tuple[int, int]) -> int:
    c1, c2 = ct
    return pow(pow(c1, priv.m, priv.p), -1, priv.p) * c2 % priv.p
