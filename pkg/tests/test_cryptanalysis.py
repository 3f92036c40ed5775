import itertools
import random
import time

import numpy as np
import pytest

from morlab._rng import make_rng, rand_below
from morlab.algebra import ExtField, FpElem, Poly, factor_integer, random_irreducible
from morlab.aut import aut_pow, make_central_aut
from morlab.cryptanalysis import (
    DlogAnswer,
    DlogInstance,
    bsgs,
    central_aut_attack,
    fp_instance,
    menezes_wu_dlog,
    pohlig_hellman,
    unipotent_dlog,
)
from morlab.errors import CapExceededError, InvalidInput, NoSolutionError
from morlab.matrix import MatrixFp, companion, is_unipotent, mat_pow_naive, matrix_order, random_invertible
from morlab.pgroup import EsParams
from morlab.protocol import ElementaryPlatform, ExtraSpecialPlatform, MorPublicKey, mor_keygen


def M(rows, p):
    return MatrixFp(np.array(rows, dtype=np.int64), p)


def brute_log(g, h, p):
    x = 1
    for k in range(p):
        if x == h:
            return k
        x = x * g % p
    return None


# --- generic solvers ----------------------------------------------------------------


def test_bsgs_examples():
    assert bsgs(fp_instance(2, 16, 19)).residue == 4
    assert bsgs(fp_instance(2, 1, 19)).residue == 0
    with pytest.raises(NoSolutionError):
        bsgs(fp_instance(4, 2, 19))


def test_bsgs_cap():
    g = FpElem(3, 2**61 - 1)
    inst = DlogInstance(g, g, factor_integer(2**61 - 2))
    with pytest.raises(CapExceededError):
        bsgs(inst)


def test_pohlig_hellman_examples():
    assert pohlig_hellman(fp_instance(2, 7, 19)).residue == 6
    assert pohlig_hellman(fp_instance(2, 2, 19)).residue == 1
    # prime order subgroup: 4 has order 9 in F_19, 7 has order 3
    inst = fp_instance(7, 11, 19)
    assert inst.order.value == 3
    assert pohlig_hellman(inst) == bsgs(inst)


@pytest.mark.parametrize("p", [19, 31, 1009])
def test_bsgs_agrees_with_pohlig_hellman(p):
    rnd = random.Random(p)
    for _ in range(500):
        g = rnd.randrange(2, p)
        m = rnd.randrange(0, p - 1)
        h = pow(g, m, p)
        inst = fp_instance(g, h, p)
        a, b = bsgs(inst), pohlig_hellman(inst)
        assert a == b
        assert a.residue == brute_log(g, h, p)
        assert a.residue == m % inst.order.value


def test_pohlig_hellman_no_solution():
    with pytest.raises(NoSolutionError):
        pohlig_hellman(fp_instance(4, 2, 19))


def test_pohlig_hellman_large_smooth_group():
    p = 2**31 - 1  # p - 1 = 2 * 3^2 * 7 * 11 * 31 * 151 * 331
    g = 7
    m = 1234567890
    ans = pohlig_hellman(fp_instance(g, pow(g, m, p), p))
    assert pow(g, ans.residue, p) == pow(g, m, p)
    assert (m - ans.residue) % ans.modulus == 0


def test_fp_instance_rejects_zero():
    with pytest.raises(InvalidInput):
        fp_instance(0, 1, 19)


def test_answer_format_and_range():
    assert str(DlogAnswer(17, 31)) == "m ≡ 17 (mod 31)"
    with pytest.raises(InvalidInput):
        DlogAnswer(31, 31)


# --- Menezes-Wu -------------------------------------------------------------------------


def ext_order_bruteforce(f):
    k = ExtField(f)
    a, one = k.gen(), k.one()
    x, n = a, 1
    while x != one:
        x, n = x * a, n + 1
    return n


def test_menezes_wu_example():
    f = Poly([3, 2, 1], 5)  # x^2 + 2x + 3: discriminant 4 - 12 = 2 is a non-residue mod 5
    g = companion(f)
    h = mat_pow_naive(g, 7)
    ans = menezes_wu_dlog(g, h)
    n = ext_order_bruteforce(f)
    assert ans.modulus == n
    assert ans.residue == 7 % n
    assert menezes_wu_dlog(g, g).residue == 1


def test_menezes_wu_rejects_reducible():
    with pytest.raises(InvalidInput, match="reducible"):
        menezes_wu_dlog(MatrixFp.identity(3, 5), MatrixFp.identity(3, 5))


def test_menezes_wu_not_a_power():
    f = Poly([3, 2, 1], 5)
    g = companion(f)
    # a matrix outside <g>: something that does not commute with g
    h = M([[1, 1], [0, 1]], 5)
    with pytest.raises(NoSolutionError):
        menezes_wu_dlog(g, h)


@pytest.mark.parametrize("p", [3, 5, 7, 31])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_menezes_wu_random(d, p):
    rng = make_rng(d * 1000 + p)
    for _ in range(100 if p ** d < 10**5 else 25):
        f = random_irreducible(d, p, rng)
        q = random_invertible(d, p, rng)
        g = q @ companion(f) @ q.inverse()  # non-companion matrix with irreducible chi
        m = rand_below(rng, p**d)
        h = mat_pow_naive(g, m)
        ans = menezes_wu_dlog(g, h)
        assert (m - ans.residue) % ans.modulus == 0
        assert mat_pow_naive(g, ans.residue) == h
        assert ans.modulus == matrix_order(g)


def test_menezes_wu_full_recovery_for_primitive_keys():
    rng = make_rng(77)
    hits = 0
    for _ in range(40):
        pub, priv = mor_keygen(ElementaryPlatform(5, 3), rng)
        ans = menezes_wu_dlog(pub.phi, pub.phi_m)
        assert ans.residue == priv.m % ans.modulus
        if priv.order_phi == 5**3 - 1:
            hits += 1
            assert ans.residue == priv.m
    assert hits > 0


# --- unipotent ------------------------------------------------------------------------------


def jordan(sizes, p):
    d = sum(sizes)
    a = np.eye(d, dtype=np.int64)
    i = 0
    for s in sizes:
        for k in range(s - 1):
            a[i + k, i + k + 1] = 1
        i += s
    return MatrixFp(a, p)


def partitions(n, largest=None):
    largest = largest or n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def test_unipotent_examples():
    u = M([[1, 1], [0, 1]], 7)
    ans = unipotent_dlog(u, mat_pow_naive(u, 10))
    assert (ans.residue, ans.modulus) == (3, 7)
    assert unipotent_dlog(MatrixFp.identity(3, 5), MatrixFp.identity(3, 5)) == DlogAnswer(0, 1)
    j3 = jordan([3], 5)
    ans = unipotent_dlog(j3, mat_pow_naive(j3, 4))
    assert ans == DlogAnswer(4, 5)
    assert matrix_order(j3) == 5


def test_unipotent_superdiagonal_identity():
    for p in (3, 5, 7):
        u = M([[1, 1], [0, 1]], p)
        for m in range(3 * p):
            assert mat_pow_naive(u, m) == M([[1, m % p], [0, 1]], p)


def test_unipotent_order_needs_p_squared():
    j = jordan([4], 3)  # nilpotency index 4 > p, so order 9
    assert matrix_order(j) == 9
    ans = unipotent_dlog(j, mat_pow_naive(j, 7))
    assert ans == DlogAnswer(7, 9)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_unipotent_all_jordan_shapes(p):
    rng = make_rng(p)
    for d in range(1, 5):
        for shape in partitions(d):
            j = jordan(shape, p)
            q = random_invertible(d, p, rng)
            u = q @ j @ q.inverse()
            order = matrix_order(u)
            for _ in range(100):
                m = rand_below(rng, 10**6)
                h = mat_pow_naive(u, m)
                ans = unipotent_dlog(u, h)
                assert ans.modulus == order
                assert ans.residue == m % order


def test_unipotent_guards():
    with pytest.raises(InvalidInput):
        unipotent_dlog(M([[2, 0], [0, 1]], 5), MatrixFp.identity(2, 5))
    u = M([[1, 1], [0, 1]], 5)
    with pytest.raises(NoSolutionError):
        unipotent_dlog(u, M([[1, 0], [1, 1]], 5))


def test_unipotent_keys_from_keygen():
    rng = make_rng(3)
    for _ in range(20):
        pub, priv = mor_keygen(ElementaryPlatform(3, 4), rng, kind="unipotent")
        assert is_unipotent(pub.phi)
        ans = unipotent_dlog(pub.phi, pub.phi_m)
        assert ans.residue == priv.m % ans.modulus


# --- central ---------------------------------------------------------------------------------


def central_key(v, m, params):
    phi = make_central_aut(v, params)
    return MorPublicKey(ExtraSpecialPlatform(params.p, params.n), phi, aut_pow(phi, m))


def test_central_examples():
    g = EsParams(31, 2)
    assert central_aut_attack(central_key([1, 2, 3, 4], 17, g)) == DlogAnswer(17, 31)
    assert central_aut_attack(central_key([1, 2, 3, 4], 31, g)).residue == 0
    pub, _ = mor_keygen(ExtraSpecialPlatform(5, 2), make_rng(0))
    with pytest.raises(InvalidInput, match="not central"):
        central_aut_attack(pub)


def test_central_guards():
    g = EsParams(5, 1)
    with pytest.raises(InvalidInput):
        central_aut_attack(central_key([0, 0], 3, g))
    phi = make_central_aut([1, 2], g)
    bad = MorPublicKey(ExtraSpecialPlatform(5, 1), phi, make_central_aut([1, 1], g))
    with pytest.raises(NoSolutionError):
        central_aut_attack(bad)


def test_central_exhaustive_small():
    g = EsParams(3, 1)
    for v in itertools.product(range(3), repeat=2):
        if not any(v):
            continue
        for m in range(9):
            assert central_aut_attack(central_key(list(v), m, g)).residue == m % 3


def test_central_large_prime_timing():
    p = 2**31 - 1
    rnd = random.Random(0)
    for n in (1, 4, 8):
        g = EsParams(p, n)
        keys = []
        for _ in range(20):
            m = rnd.randrange(p)
            v = [rnd.randrange(p) for _ in range(2 * n)]
            keys.append((central_key(v, m, g), m))
        for pub, m in keys:
            t0 = time.perf_counter()
            ans = central_aut_attack(pub)
            elapsed = time.perf_counter() - t0
            assert ans.residue == m % p
            assert elapsed < 1e-3
