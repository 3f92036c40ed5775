"""Hot inner loops: modular matrix products, matrix powering, cyclic-subspace scan.

Each kernel exists twice.  The ``nb_*`` versions are numba ``@njit`` loops over
int64 arrays; the ``np_*`` versions use only numpy.  The public names
(``matmul_mod``, ``matpow_bits``, ``find_short_cycle``) bind to the numba
versions unless numba is missing or ``MORLAB_NO_NUMBA`` is set to a non-empty
value other than ``0``.  Object arrays (p >= 2**31) always go to numpy.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_flag = os.environ.get("MORLAB_NO_NUMBA", "")
NUMBA_ENABLED = numba is not None and _flag in ("", "0")

# int64 matmul is exact when every entry is < 2**31 and d*(p-1)**2 < 2**63.
_DIRECT_BOUND = 1 << 63


def exponent_bits(e: int) -> np.ndarray:
    """Binary digits of ``e``, most significant first (empty for 0)."""
    if e < 0:
        raise ValueError("negative exponent")
    return np.frombuffer(bin(e)[2:].encode(), dtype=np.uint8) - ord("0") if e else np.zeros(0, np.uint8)


# ---------------------------------------------------------------------------
# numpy fallback


def np_matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return (a.astype(object) @ b.astype(object)) % p
    if a.shape[1] * (p - 1) ** 2 < _DIRECT_BOUND:
        return (a @ b) % p
    # split b into 16-bit halves so partial sums stay below 2**63
    lo = b & 0xFFFF
    hi = b >> 16
    return ((((a @ hi) % p) * 65536) % p + (a @ lo) % p) % p


def np_matpow_bits(a: np.ndarray, bits: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    result = np.eye(n, dtype=np.int64).astype(a.dtype) % p
    for bit in bits:
        result = np_matmul_mod(result, result, p)
        if bit:
            result = np_matmul_mod(result, a, p)
    return result


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    return inv


def np_find_short_cycle(m: np.ndarray, p: int, chunk: int = 4096) -> np.ndarray | None:
    """First normalized nonzero v whose Krylov space under ``m`` is proper.

    Vectors are scanned by position of the leading 1, then by the base-p digits
    of the tail (least significant first).  Returns ``v`` or ``None``.
    """
    d = m.shape[0]
    inv = _inverse_table(p)
    mt = m.T.astype(np.int64)
    for lead in range(d):
        tail = d - 1 - lead
        total = p**tail
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            v = np.zeros((idx.size, d), dtype=np.int64)
            v[:, lead] = 1
            rest = idx.copy()
            for j in range(lead + 1, d):
                v[:, j] = rest % p
                rest //= p
            k = np.empty((idx.size, d, d), dtype=np.int64)
            k[:, 0] = v
            for j in range(1, d):
                k[:, j] = (k[:, j - 1] @ mt) % p
            singular = np.zeros(idx.size, dtype=bool)
            rows = np.arange(idx.size)
            for c in range(d):
                nz = k[:, c:, c] != 0
                has = nz.any(axis=1)
                singular |= ~has
                piv = np.argmax(nz, axis=1) + c
                top = k[rows, c].copy()
                k[rows, c] = k[rows, piv]
                k[rows, piv] = top
                k[:, c] = (k[:, c] * inv[k[:, c, c]][:, None]) % p
                k[:, c + 1 :] = (k[:, c + 1 :] - k[:, c + 1 :, c : c + 1] * k[:, c : c + 1, :]) % p
            hit = np.flatnonzero(singular)
            if hit.size:
                return v[int(hit[0])]
    return None


# ---------------------------------------------------------------------------
# numba


if numba is not None:

    @numba.njit(cache=True)
    def nb_matmul_mod(a, b, p):
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                ait = a[i, t]
                if ait == 0:
                    continue
                for j in range(m):
                    out[i, j] = (out[i, j] + ait * b[t, j]) % p
        return out

    @numba.njit(cache=True)
    def nb_matpow_bits(a, bits, p):
        n = a.shape[0]
        result = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            result[i, i] = 1 % p
        for bit in bits:
            result = nb_matmul_mod(result, result, p)
            if bit:
                result = nb_matmul_mod(result, a, p)
        return result

    @numba.njit(cache=True)
    def _nb_scan(m, p, inv):
        d = m.shape[0]
        v = np.zeros(d, dtype=np.int64)
        k = np.zeros((d, d), dtype=np.int64)
        for lead in range(d):
            total = 1
            for _ in range(d - 1 - lead):
                total *= p
            for idx in range(total):
                for j in range(d):
                    v[j] = 0
                v[lead] = 1
                rest = idx
                for j in range(lead + 1, d):
                    v[j] = rest % p
                    rest //= p
                # spin and reduce incrementally; row r of k holds a reduced Krylov vector
                w = v.copy()
                found = False
                for r in range(d):
                    red = w.copy()
                    for s in range(r):
                        ps = -1
                        for c in range(d):
                            if k[s, c] != 0:
                                ps = c
                                break
                        f = red[ps]
                        if f != 0:
                            for c in range(d):
                                red[c] = (red[c] - f * k[s, c]) % p
                    pc = -1
                    for c in range(d):
                        if red[c] != 0:
                            pc = c
                            break
                    if pc < 0:
                        found = True
                        break
                    s_inv = inv[red[pc]]
                    for c in range(d):
                        k[r, c] = red[c] * s_inv % p
                    nxt = np.zeros(d, dtype=np.int64)
                    for i in range(d):
                        acc = 0
                        for c in range(d):
                            acc = (acc + m[i, c] * w[c]) % p
                        nxt[i] = acc
                    w = nxt
                if found:
                    return v.copy()
        return np.zeros(0, dtype=np.int64)

    def nb_find_short_cycle(m: np.ndarray, p: int) -> np.ndarray | None:
        out = _nb_scan(np.ascontiguousarray(m, dtype=np.int64), p, _inverse_table(p))
        return out if out.size else None


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if NUMBA_ENABLED and a.dtype == np.int64 and b.dtype == np.int64:
        return nb_matmul_mod(a, b, p)
    return np_matmul_mod(a, b, p)


def matpow_bits(a: np.ndarray, bits: np.ndarray, p: int) -> np.ndarray:
    if NUMBA_ENABLED and a.dtype == np.int64:
        return nb_matpow_bits(a, bits, p)
    return np_matpow_bits(a, bits, p)


def find_short_cycle(m: np.ndarray, p: int) -> np.ndarray | None:
    if NUMBA_ENABLED:
        return nb_find_short_cycle(m, p)
    return np_find_short_cycle(m, p)
