"""Line-based text files for MOR keys and ciphertexts.

Layout::

    MOR-PUBLIC v1
    platform: extraspecial
    p: 5
    n: 2
    phi.M: <row-major decimals>
    phi.v: <decimals>
    phi.zeta: <decimal>
    ...

Keys appear in a fixed order, so ``write_artifact`` output is canonical.
Parsing revalidates every arithmetic invariant before returning an object.
"""
from __future__ import annotations

import numpy as np

from .algebra import check_prime, is_irreducible
from .aut import EsAut, aut_validate
from .errors import InvalidInput
from .matrix import MatrixFp, char_poly
from .protocol import (
    ElementaryPlatform,
    ExtraSpecialPlatform,
    MorCiphertext,
    MorPrivateKey,
    MorPublicKey,
)

VERSION = "v1"
KINDS = ("MOR-PUBLIC", "MOR-PRIVATE", "MOR-CT")


class ArtifactError(InvalidInput):
    pass


def _ints(xs) -> str:
    return " ".join(str(int(x)) for x in xs)


def _platform_lines(platform) -> list[tuple[str, str]]:
    if isinstance(platform, ExtraSpecialPlatform):
        return [("platform", "extraspecial"), ("p", str(platform.p)), ("n", str(platform.n))]
    return [("platform", "elementary"), ("p", str(platform.p)), ("d", str(platform.d))]


def _aut_lines(prefix: str, phi) -> list[tuple[str, str]]:
    if isinstance(phi, EsAut):
        return [(f"{prefix}.M", _ints(phi.M.flat())), (f"{prefix}.v", _ints(phi.v)), (f"{prefix}.zeta", str(phi.zeta))]
    return [(f"{prefix}.M", _ints(phi.flat()))]


def _irreducible_claim(phi) -> str:
    m = phi.M if isinstance(phi, EsAut) else phi
    return "yes" if is_irreducible(char_poly(m)) else "no"


def write_artifact(obj) -> str:
    if isinstance(obj, MorPublicKey):
        kind = "MOR-PUBLIC"
        fields = _platform_lines(obj.platform)
        fields += [("irreducible", _irreducible_claim(obj.phi))]
        fields += _aut_lines("phi", obj.phi) + _aut_lines("phi_m", obj.phi_m)
    elif isinstance(obj, MorPrivateKey):
        kind = "MOR-PRIVATE"
        fields = _platform_lines(obj.platform)
        fields += [("m", str(obj.m)), ("order", str(obj.order_phi))]
        fields += _aut_lines("phi", obj.phi)
    elif isinstance(obj, MorCiphertext):
        kind = "MOR-CT"
        fields = _platform_lines(obj.platform)
        fields += _aut_lines("phi_r", obj.phi_r)
        fields += [("payload", _ints(obj.platform.to_digits(obj.payload)))]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines = [f"{kind} {VERSION}"] + [f"{k}: {v}" for k, v in fields]
    return "\n".join(lines) + "\n"


class _Fields:
    def __init__(self, lines: list[str]):
        self.data: dict[str, str] = {}
        for ln in lines:
            if not ln.strip():
                continue
            key, sep, value = ln.partition(":")
            if not sep:
                raise ArtifactError(f"malformed line {ln!r}")
            key = key.strip()
            if key in self.data:
                raise ArtifactError(f"duplicate field {key!r}")
            self.data[key] = value.strip()
        self.used: set[str] = set()

    def get(self, key: str) -> str:
        if key not in self.data:
            raise ArtifactError(f"truncated artifact: missing field {key!r}")
        self.used.add(key)
        return self.data[key]

    def int(self, key: str) -> int:
        raw = self.get(key)
        try:
            return int(raw)
        except ValueError as exc:
            raise ArtifactError(f"field {key!r} is not an integer") from exc

    def ints(self, key: str, count: int) -> list[int]:
        raw = self.get(key).split()
        try:
            vals = [int(x) for x in raw]
        except ValueError as exc:
            raise ArtifactError(f"field {key!r} is not a list of integers") from exc
        if len(vals) != count:
            raise ArtifactError(f"field {key!r} has {len(vals)} entries, expected {count}")
        return vals

    def finish(self):
        extra = set(self.data) - self.used
        if extra:
            raise ArtifactError(f"unknown fields: {sorted(extra)}")


def _reduced(vals: list[int], p: int, key: str) -> list[int]:
    if any(not 0 <= x < p for x in vals):
        raise ArtifactError(f"field {key!r} has entries outside [0, p)")
    return vals


def _read_platform(f: _Fields):
    name = f.get("platform")
    p = f.int("p")
    try:
        check_prime(p)
    except InvalidInput as exc:
        raise ArtifactError(f"invariant failed: primality of p ({exc})") from exc
    if name == "extraspecial":
        return ExtraSpecialPlatform(p, f.int("n"))
    if name == "elementary":
        return ElementaryPlatform(p, f.int("d"))
    raise ArtifactError(f"unknown platform {name!r}")


def _read_aut(f: _Fields, prefix: str, platform):
    p = platform.p
    if isinstance(platform, ExtraSpecialPlatform):
        dim = 2 * platform.n
        m = _reduced(f.ints(f"{prefix}.M", dim * dim), p, f"{prefix}.M")
        v = _reduced(f.ints(f"{prefix}.v", dim), p, f"{prefix}.v")
        zeta = f.int(f"{prefix}.zeta")
        try:
            return aut_validate(MatrixFp(np.array(m, dtype=object).reshape(dim, dim), p), v, zeta, platform.params)
        except InvalidInput as exc:
            raise ArtifactError(f"invalid automorphism in {prefix}: {exc}") from exc
    dim = platform.d
    m = _reduced(f.ints(f"{prefix}.M", dim * dim), p, f"{prefix}.M")
    try:
        return platform.validate(MatrixFp(np.array(m, dtype=object).reshape(dim, dim), p))
    except InvalidInput as exc:
        raise ArtifactError(f"invalid automorphism in {prefix}: {exc}") from exc


def parse_artifact(text: str):
    lines = text.splitlines()
    if not lines:
        raise ArtifactError("empty artifact")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in KINDS:
        raise ArtifactError(f"bad header {lines[0]!r}")
    kind, version = head
    if version != VERSION:
        raise ArtifactError(f"unsupported version {version!r} (expected {VERSION})")
    f = _Fields(lines[1:])
    platform = _read_platform(f)
    if kind == "MOR-PUBLIC":
        claim = f.get("irreducible")
        phi = _read_aut(f, "phi", platform)
        phi_m = _read_aut(f, "phi_m", platform)
        if claim not in ("yes", "no"):
            raise ArtifactError("field 'irreducible' must be yes or no")
        if _irreducible_claim(phi) != claim:
            raise ArtifactError("invariant failed: irreducibility claim does not match phi")
        obj = MorPublicKey(platform, phi, phi_m)
    elif kind == "MOR-PRIVATE":
        m, order = f.int("m"), f.int("order")
        phi = _read_aut(f, "phi", platform)
        if order < 1 or not 0 <= m < order:
            raise ArtifactError("invariant failed: 0 <= m < order")
        if platform.power(phi, order) != platform.identity_aut():
            raise ArtifactError("invariant failed: phi^order is not the identity")
        obj = MorPrivateKey(platform, m, order, phi)
    else:
        phi_r = _read_aut(f, "phi_r", platform)
        digits = len(platform.to_digits(platform.identity_element()))
        payload = platform.from_digits(_reduced(f.ints("payload", digits), platform.p, "payload"))
        obj = MorCiphertext(platform, phi_r, payload)
    f.finish()
    return obj


__all__ = ["ArtifactError", "parse_artifact", "write_artifact"]
