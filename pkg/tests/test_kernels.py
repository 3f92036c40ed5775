import os
import subprocess
import sys

import numpy as np
import pytest

from morlab import _kernels
from morlab._rng import make_rng
from morlab.algebra import random_irreducible
from morlab.matrix import MatrixFp, companion, mat_pow_lg, mat_pow_naive, random_invertible

needs_numba = pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba disabled")


def rand_mat(rng, d, p, dtype=np.int64):
    if dtype == object:
        return np.array([[int(rng.integers(0, 2**62)) * 4 % p for _ in range(d)] for _ in range(d)], dtype=object)
    return rng.integers(0, p, size=(d, d), dtype=np.int64)


def slow_matmul(a, b, p):
    n, k, m = a.shape[0], a.shape[1], b.shape[1]
    return [[sum(int(a[i, t]) * int(b[t, j]) for t in range(k)) % p for j in range(m)] for i in range(n)]


def slow_pow(a, e, p):
    result = [[int(i == j) for j in range(len(a))] for i in range(len(a))]
    base = [[int(x) for x in row] for row in a]
    while e:
        if e & 1:
            result = slow_matmul(np.array(result, dtype=object), np.array(base, dtype=object), p)
        base = slow_matmul(np.array(base, dtype=object), np.array(base, dtype=object), p)
        e >>= 1
    return result


def is_krylov_proper(m, v, p):
    rows, w = [], [int(x) for x in v]
    for _ in range(len(v)):
        rows.append(w)
        w = [sum(int(m[i, c]) * w[c] for c in range(len(v))) % p for i in range(len(v))]
    return MatrixFp(np.array(rows, dtype=np.int64), p).det() == 0


def test_exponent_bits():
    assert list(_kernels.exponent_bits(0)) == []
    assert list(_kernels.exponent_bits(1)) == [1]
    assert list(_kernels.exponent_bits(10)) == [1, 0, 1, 0]
    e = 2**200 + 12345
    assert int("".join(map(str, _kernels.exponent_bits(e))), 2) == e
    with pytest.raises(ValueError):
        _kernels.exponent_bits(-1)


@pytest.mark.parametrize("p", [2, 7, 65521, 2**31 - 1])
def test_numpy_matmul_matches_python(p):
    rng = make_rng(p % 1000)
    for d in (1, 3, 8, 17):
        a, b = rand_mat(rng, d, p), rand_mat(rng, d, p)
        assert _kernels.np_matmul_mod(a, b, p).tolist() == slow_matmul(a, b, p)


def test_numpy_matmul_split_path_with_large_dimension():
    # d * (p-1)^2 >= 2^63 forces the 16-bit split
    p = 2**31 - 1
    rng = make_rng(9)
    a, b = rand_mat(rng, 64, p), rand_mat(rng, 64, p)
    assert 64 * (p - 1) ** 2 >= 2**63
    assert _kernels.np_matmul_mod(a, b, p).tolist() == slow_matmul(a, b, p)


def test_object_arrays():
    p = 2**61 - 1
    rng = make_rng(1)
    a, b = rand_mat(rng, 5, p, object), rand_mat(rng, 5, p, object)
    assert _kernels.matmul_mod(a, b, p).tolist() == slow_matmul(a, b, p)
    e = 2**70 + 3
    got = _kernels.matpow_bits(a, _kernels.exponent_bits(e), p)
    assert got.dtype == object
    assert got.tolist() == slow_pow(a, e, p)


@needs_numba
@pytest.mark.parametrize("p", [2, 3, 13, 65521, 2**31 - 1])
def test_numba_numpy_matmul_parity(p):
    rng = make_rng(p % 997)
    for d in (1, 2, 5, 16, 33):
        for _ in range(10):
            a, b = rand_mat(rng, d, p), rand_mat(rng, d, p)
            assert (_kernels.nb_matmul_mod(a, b, p) == _kernels.np_matmul_mod(a, b, p)).all()


@needs_numba
@pytest.mark.parametrize("p", [3, 13, 2**31 - 1])
def test_numba_numpy_matpow_parity(p):
    rng = make_rng(p % 991)
    for d in (2, 4, 8):
        for _ in range(10):
            a = rand_mat(rng, d, p)
            e = int(rng.integers(0, 2**62)) << 64 | int(rng.integers(0, 2**62))
            bits = _kernels.exponent_bits(e)
            assert (_kernels.nb_matpow_bits(a, bits, p) == _kernels.np_matpow_bits(a, bits, p)).all()
        empty = _kernels.exponent_bits(0)
        assert (_kernels.nb_matpow_bits(a, empty, p) == np.eye(d, dtype=np.int64)).all()


@pytest.mark.parametrize("p", [3, 5])
def test_find_short_cycle_numpy_is_correct(p):
    rng = make_rng(p)
    for d in (2, 3, 4):
        for _ in range(10):
            m = random_invertible(d, p, rng).a
            v = _kernels.np_find_short_cycle(m, p)
            if v is not None:
                assert is_krylov_proper(m, list(v), p)
        # companion of an irreducible polynomial: every nonzero v is cyclic
        c = companion(random_irreducible(d, p, rng)).a
        assert _kernels.np_find_short_cycle(c, p) is None
    assert list(_kernels.np_find_short_cycle(np.eye(3, dtype=np.int64), p)) == [1, 0, 0]


@needs_numba
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_find_short_cycle_parity(p):
    rng = make_rng(100 + p)
    for d in (1, 2, 3, 4):
        for _ in range(15):
            m = random_invertible(d, p, rng).a
            a, b = _kernels.nb_find_short_cycle(m, p), _kernels.np_find_short_cycle(m, p)
            assert (a is None) == (b is None)
            if a is not None:
                assert a.tolist() == b.tolist()


def test_mat_pow_agrees_with_naive_under_active_backend():
    rng = make_rng(4)
    for p in (3, 11):
        for d in (2, 5):
            g = random_invertible(d, p, rng)
            for e in (0, 1, 2, 37, 1000):
                assert mat_pow_lg(g, e) == mat_pow_naive(g, e)


def backend_flag(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("MORLAB_NO_NUMBA", None)
    else:
        env["MORLAB_NO_NUMBA"] = env_value
    code = "from morlab import _kernels; print(_kernels.NUMBA_ENABLED)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_flag_disables_numba():
    assert backend_flag("1") == "False"
    assert backend_flag("yes") == "False"


@needs_numba
def test_env_flag_zero_keeps_numba():
    assert backend_flag("0") == "True"
    assert backend_flag(None) == "True"


def test_fallback_backend_end_to_end():
    env = dict(os.environ, MORLAB_NO_NUMBA="1")
    code = (
        "from morlab import mor_keygen, mor_encrypt, mor_decrypt, ExtraSpecialPlatform\n"
        "from morlab._rng import make_rng\n"
        "pl = ExtraSpecialPlatform(7, 2); rng = make_rng(0)\n"
        "pub, priv = mor_keygen(pl, rng); a = pl.random_element(rng)\n"
        "assert mor_decrypt(priv, mor_encrypt(pub, a, rng)) == a\n"
        "print('ok')"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "ok"
