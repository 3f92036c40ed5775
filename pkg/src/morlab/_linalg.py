"""Gaussian elimination over F_p on numpy arrays.

Arrays are int64 when p < 2**31 (products fit in 62 bits) and object arrays
of Python ints otherwise; every routine works for both.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidInput

INT64_LIMIT = 1 << 31


def dtype_for(p: int):
    return np.int64 if p < INT64_LIMIT else object


def as_field_array(a, p: int) -> np.ndarray:
    if dtype_for(p) is object:
        return np.vectorize(lambda x: int(x) % p, otypes=[object])(np.asarray(a, dtype=object))
    return np.mod(np.asarray(a, dtype=np.int64), p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    r = np.array(a, dtype=a.dtype, copy=True)
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.flatnonzero(r[row:, col] != 0)
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        r[row] = (r[row] * inv) % p
        factors = r[:, col].copy()
        factors[row] = 0
        if np.any(factors != 0):
            r = (r - np.outer(factors, r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def det(a: np.ndarray, p: int) -> int:
    r = np.array(a, dtype=a.dtype, copy=True)
    n = r.shape[0]
    d = 1
    for col in range(n):
        nz = np.flatnonzero(r[col:, col] != 0)
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            r[[col, piv]] = r[[piv, col]]
            d = -d
        pv = int(r[col, col])
        d = d * pv % p
        inv = pow(pv, -1, p)
        below = (r[col + 1 :, col] * inv) % p
        if np.any(below != 0):
            r[col + 1 :] = (r[col + 1 :] - np.outer(below, r[col])) % p
    return d % p


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64).astype(a.dtype)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)):
        raise InvalidInput("matrix is singular")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution X of a @ X = b (free variables set to 0)."""
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    rows, cols = a.shape
    aug = np.concatenate([a, bb.astype(a.dtype)], axis=1)
    r, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        raise InvalidInput("linear system is inconsistent")
    x = np.zeros((cols, bb.shape[1]), dtype=a.dtype)
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x[:, 0] if vec else x


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : a @ x = 0} as the columns of the returned matrix."""
    rows, cols = a.shape
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((cols, len(free)), dtype=a.dtype)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(piv):
            basis[c, k] = (-r[i, f]) % p
    return basis
