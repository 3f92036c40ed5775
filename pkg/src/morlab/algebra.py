"""Exact arithmetic in F_p, F_p[x] and F_p[t]/m(t).

Elements are small immutable value objects.  Coefficients are plain Python
ints, so moduli up to 2**64 and exponents of any size are handled exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import FactorizationTimeout, InvalidInput, MorlabError

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6
_RHO_CAP = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise InvalidInput(f"modulus {self.p!r} is not prime")
        object.__setattr__(self, "p", int(self.p))

    def __int__(self):
        return self.p


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Validate ``p`` once and hand back a plain int."""
    return PrimeModulus(p).p


# ---------------------------------------------------------------------------
# F_p


class FpElem:
    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = check_prime(int(p))
        self.value = int(value) % self.p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise InvalidInput(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpElem(o, self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, p={self.p})"


# ---------------------------------------------------------------------------
# F_p[x]


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Dense polynomial over F_p, coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[int], p: int):
        self.p = check_prime(int(p))
        self.coeffs = _trim([int(c) % self.p for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...], p: int) -> "Poly":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.p = p
        return obj

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls((0, 1), p)

    @classmethod
    def one(cls, p: int) -> "Poly":
        return cls((1,), p)

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls((), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.p != self.p:
            raise InvalidInput(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return Poly._raw(_trim(out), self.p)

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple((-c) % self.p for c in self.coeffs), self.p)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, np.integer, FpElem)):
            k = int(other) % self.p
            return Poly._raw(_trim([c * k % self.p for c in self.coeffs]), self.p)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw((), self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly._raw(_trim([c % self.p for c in out]), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        r = list(self.coeffs)
        db = other.degree
        inv = pow(other.lead, -1, p)
        if len(r) - 1 < db:
            return Poly._raw((), p), self
        q = [0] * (len(r) - db)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * inv % p
            if c:
                q[k - db] = c
                for j in range(db + 1):
                    r[k - db + j] = (r[k - db + j] - c * b[j]) % p
        return Poly._raw(_trim(q), p), Poly._raw(_trim(r[:db]), p)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.p), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            raise InvalidInput("the zero polynomial has no monic associate")
        return self * pow(self.lead, -1, self.p)

    def __call__(self, x):
        """Horner evaluation at an int, FpElem, ExtFieldElem or Poly."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return 0 * x if not isinstance(x, int) else 0
        if isinstance(acc, int):
            return acc % self.p
        return acc

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __repr__(self):
        return f"Poly({list(self.coeffs)}, p={self.p})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)


def poly_arith(f: Poly, g: Poly, op: str):
    """Dispatch helper: ``op`` is one of add, sub, mul, divmod."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(f: Poly, g: Poly) -> Poly:
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise InvalidInput("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_lcm(f: Poly, g: Poly) -> Poly:
    return (f * g // poly_gcd(f, g)).monic()


def poly_powmod(f: Poly, e: int, m: Poly) -> Poly:
    """``f**e mod m`` by left-to-right square-and-multiply."""
    f._check(m)
    if m.degree < 1:
        raise InvalidInput("modulus polynomial must have degree >= 1")
    if e < 0:
        raise ValueError("negative exponent")
    base = f % m
    result = Poly.one(f.p) % m
    for bit in bin(e)[2:] if e else "":
        result = result * result % m
        if bit == "1":
            result = result * base % m
    return result


def _prime_divisors_small(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: x^(p^d) = x mod f and gcd(x^(p^(d/r)) - x, f) = 1 for primes r | d."""
    if f.degree < 1 or not f.is_monic():
        raise InvalidInput("irreducibility test needs a monic non-constant polynomial")
    d, p = f.degree, f.p
    if d == 1:
        return True
    x = Poly.x(p)
    for r in _prime_divisors_small(d):
        h = poly_powmod(x, p ** (d // r), f) - x
        if poly_gcd(h, f).degree > 0:
            return False
    return poly_powmod(x, p**d, f) == x % f


def random_irreducible(d: int, p: int, rng: np.random.Generator) -> Poly:
    """Rejection-sample a uniformly random monic irreducible polynomial of degree ``d``."""
    if d < 1:
        raise InvalidInput("degree must be >= 1")
    p = check_prime(int(p))
    for _ in range(1000 * d):
        f = Poly([int(c) for c in rng.integers(0, p, size=d)] + [1], p)
        if is_irreducible(f):
            return f
    raise MorlabError(f"no irreducible polynomial found after {1000 * d} draws")


# ---------------------------------------------------------------------------
# integers


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 1
        for q, e in self.factors:
            if q <= prev or e < 1:
                raise InvalidInput("factors must be strictly increasing primes with positive exponents")
            prev = q
            prod *= q**e
        if prod != self.value:
            raise InvalidInput(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> list[int]:
        return [q for q, _ in self.factors]

    @classmethod
    def from_dict(cls, fac: dict[int, int]) -> "FactoredInteger":
        items = tuple(sorted((q, e) for q, e in fac.items() if e > 0))
        value = 1
        for q, e in items:
            value *= q**e
        return cls(value, items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def divisor(self, n: int) -> "FactoredInteger":
        """Factored form of a divisor ``n`` of this value."""
        if n <= 0 or self.value % n:
            raise InvalidInput(f"{n} does not divide {self.value}")
        fac = {}
        for q, _ in self.factors:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            if e:
                fac[q] = e
        return FactoredInteger.from_dict(fac)


@lru_cache(maxsize=1)
def _small_primes() -> np.ndarray:
    sieve = np.ones(_TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(_TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


def _pollard_brent(n: int, seed: int) -> int:
    """Return a non-trivial factor of the composite ``n``."""
    y, c, m = seed % n, (seed * 7 + 1) % n or 1, 128
    g = r = q = 1
    steps = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > _RHO_CAP:
            raise FactorizationTimeout(f"Pollard rho exceeded {_RHO_CAP} steps on {n}")
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    for seed in range(2, 40):
        g = _pollard_brent(n, seed)
        if 1 < g < n:
            _split(g, out)
            _split(n // g, out)
            return
    raise FactorizationTimeout(f"could not split {n}")


@lru_cache(maxsize=4096)
def factor_integer(n: int) -> FactoredInteger:
    """Trial division by primes below 10**6, then Pollard-Brent rho."""
    if n < 1 or n >= 1 << 64:
        raise InvalidInput("factor_integer expects 1 <= n < 2**64")
    fac: dict[int, int] = {}
    for q in _small_primes():
        q = int(q)
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            fac[q] = e
    if n > 1:
        _split(n, fac)
    return FactoredInteger.from_dict(fac)


def factor_lcm(parts: Sequence[FactoredInteger]) -> FactoredInteger:
    fac: dict[int, int] = {}
    for part in parts:
        for q, e in part.factors:
            fac[q] = max(fac.get(q, 0), e)
    return FactoredInteger.from_dict(fac)


def order_from_multiple(a, one, n: FactoredInteger) -> int:
    """Least k with a**k == one, given that k divides ``n.value``."""
    if a**n.value != one:
        raise InvalidInput(f"element does not satisfy a^{n.value} = 1")
    k = n.value
    for q, e in n.factors:
        for _ in range(e):
            if a ** (k // q) == one:
                k //= q
            else:
                break
    return k


def mult_order(a, group_order: FactoredInteger) -> int:
    """Multiplicative order of a nonzero FpElem or ExtFieldElem."""
    if isinstance(a, FpElem):
        one = FpElem(1, a.p)
        zero = a.value == 0
    elif isinstance(a, ExtFieldElem):
        one = a.field.one()
        zero = a.is_zero()
    else:
        raise TypeError(f"unsupported element type {type(a).__name__}")
    if zero:
        raise InvalidInput("0 has no multiplicative order")
    return order_from_multiple(a, one, group_order)


# ---------------------------------------------------------------------------
# F_p[t]/m(t)


class ExtField:
    __slots__ = ("modulus_poly", "p", "degree")

    def __init__(self, modulus_poly: Poly, check: bool = True):
        if modulus_poly.degree < 1 or not modulus_poly.is_monic():
            raise InvalidInput("extension modulus must be monic of degree >= 1")
        if check and not is_irreducible(modulus_poly):
            raise InvalidInput(f"{modulus_poly} is reducible over F_{modulus_poly.p}")
        self.modulus_poly = modulus_poly
        self.p = modulus_poly.p
        self.degree = modulus_poly.degree

    @property
    def size(self) -> int:
        return self.p**self.degree

    def __call__(self, rep) -> "ExtFieldElem":
        if isinstance(rep, (int, np.integer)):
            rep = Poly((rep,), self.p)
        elif not isinstance(rep, Poly):
            rep = Poly(rep, self.p)
        return ExtFieldElem(rep % self.modulus_poly, self)

    def one(self) -> "ExtFieldElem":
        return self(1)

    def gen(self) -> "ExtFieldElem":
        """The class of t."""
        return self(Poly.x(self.p))

    def multiplicative_order_factored(self) -> FactoredInteger:
        return factor_integer(self.size - 1)

    def __eq__(self, other):
        return isinstance(other, ExtField) and self.modulus_poly == other.modulus_poly

    def __hash__(self):
        return hash(self.modulus_poly)

    def __repr__(self):
        return f"ExtField({self.modulus_poly})"


class ExtFieldElem:
    __slots__ = ("rep", "field")

    def __init__(self, rep: Poly, field: ExtField):
        if rep.degree >= field.degree:
            raise InvalidInput("representative degree must be below the field degree")
        self.rep = rep
        self.field = field

    def _other(self, other) -> Poly:
        if isinstance(other, ExtFieldElem):
            if other.field != self.field:
                raise InvalidInput("elements of different extension fields")
            return other.rep
        if isinstance(other, (int, np.integer, FpElem)):
            return Poly((int(other),), self.field.p)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else ExtFieldElem(self.rep + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else ExtFieldElem(self.rep - o, self.field)

    def __neg__(self):
        return ExtFieldElem(-self.rep, self.field)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ExtFieldElem(self.rep * o % self.field.modulus_poly, self.field)

    __rmul__ = __mul__

    def inverse(self) -> "ExtFieldElem":
        if self.is_zero():
            raise ZeroDivisionError("0 has no inverse")
        return self ** (self.field.size - 2)

    def __pow__(self, k: int) -> "ExtFieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        return ExtFieldElem(poly_powmod(self.rep, k, self.field.modulus_poly), self.field)

    def frobenius(self, j: int = 1) -> "ExtFieldElem":
        return self ** (self.field.p**j)

    def __eq__(self, other):
        if isinstance(other, ExtFieldElem):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, np.integer)):
            return self.rep == Poly((int(other),), self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.rep.coeffs, self.field.p, self.field.degree))

    def __repr__(self):
        return f"ExtFieldElem({self.rep})"
