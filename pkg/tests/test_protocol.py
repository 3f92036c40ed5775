import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morlab._rng import make_rng
from morlab.algebra import is_irreducible
from morlab.aut import EsAut, aut_apply, aut_pow, identity_aut
from morlab.artifacts import write_artifact
from morlab.errors import InvalidInput
from morlab.matrix import MatrixFp, char_poly, companion_poly, mat_pow_naive
from morlab.pgroup import EsParams
from morlab.protocol import (
    ElementaryPlatform,
    ExtraSpecialPlatform,
    MorCiphertext,
    MorPrivateKey,
    MorPublicKey,
    decode_message,
    dh_from_decryption_oracle,
    elgamal_decrypt,
    elgamal_encrypt,
    elgamal_keygen,
    encode_message,
    mor_decrypt,
    mor_encrypt,
    mor_keygen,
    platform_of,
)

ES = [(3, 1), (5, 2), (7, 2)]
EL = [(3, 4), (5, 4)]


def platforms():
    return [ExtraSpecialPlatform(p, n) for p, n in ES] + [ElementaryPlatform(p, d) for p, d in EL]


def random_bytes(platform, rnd):
    value = rnd.randrange(platform.capacity)
    return value.to_bytes((value.bit_length() + 7) // 8, "big")


@pytest.mark.parametrize("platform", platforms(), ids=lambda pl: f"{pl.name}-{pl.p}")
def test_roundtrip_messages(platform):
    rng = make_rng(platform.p)
    rnd = random.Random(platform.p)
    pub, priv = mor_keygen(platform, rng)
    for _ in range(100):
        msg = random_bytes(platform, rnd)
        ct = mor_encrypt(pub, encode_message(msg, platform), rng)
        assert decode_message(mor_decrypt(priv, ct), platform) == msg
        assert mor_decrypt(priv, ct, method="exponent") == mor_decrypt(priv, ct, method="inverse")


@pytest.mark.parametrize("platform", platforms(), ids=lambda pl: f"{pl.name}-{pl.p}")
def test_keygen_invariants(platform):
    rng = make_rng(7)
    for _ in range(10):
        pub, priv = mor_keygen(platform, rng)
        assert 2 <= priv.m < priv.order_phi
        assert priv.order_phi > 3
        assert platform.power(priv.phi, priv.order_phi) == platform.identity_aut()
        assert pub.phi_m == platform.power(pub.phi, priv.m)
        chi = char_poly(pub.phi.M if platform.name == "extraspecial" else pub.phi)
        assert is_irreducible(chi)


def test_keygen_forced_m_and_determinism():
    platform = ExtraSpecialPlatform(5, 2)
    pub, _ = mor_keygen(platform, make_rng(1), m=1)
    assert pub.phi_m == pub.phi
    a, b = mor_keygen(platform, make_rng(3)), mor_keygen(platform, make_rng(3))
    assert write_artifact(a[0]) == write_artifact(b[0])
    assert write_artifact(a[1]) == write_artifact(b[1])


def test_elementary_keygen_uses_companion_of_irreducible_quadratic():
    quads = {(1, 0, 1), (2, 1, 1), (2, 2, 1)}
    for seed in range(10):
        pub, _ = mor_keygen(ElementaryPlatform(3, 2), make_rng(seed))
        f = companion_poly(pub.phi)
        assert f is not None and f.coeffs in quads


def test_encrypt_identity_and_recomputation():
    platform = ExtraSpecialPlatform(5, 2)
    pub, priv = mor_keygen(platform, make_rng(0))
    ident = platform.identity_element()
    for r in (2, 5, 17):
        ct = mor_encrypt(pub, ident, make_rng(0), r=r)
        assert ct.payload == ident
        assert ct.phi_r == aut_pow(pub.phi, r)


def test_encrypt_hooked_exponents_p3():
    platform = ExtraSpecialPlatform(3, 1)
    pub, priv = mor_keygen(platform, make_rng(5), m=2)
    g = platform.params
    rnd = random.Random(0)
    for _ in range(20):
        a = g.random(make_rng(rnd.randrange(1000)))
        ct = mor_encrypt(pub, a, make_rng(0), r=2)
        expect = a
        for _ in range(4):
            expect = aut_apply(pub.phi, expect)
        assert ct.payload == expect
        assert mor_decrypt(priv, ct) == a


def test_zero_total_exponent_edge():
    platform = ExtraSpecialPlatform(5, 1)
    pub, priv = mor_keygen(platform, make_rng(2))
    order = priv.order_phi
    a = platform.random_element(make_rng(1))
    ct = mor_encrypt(pub, a, make_rng(0), r=order)
    assert ct.payload == a
    assert mor_decrypt(priv, ct) == a


def test_encrypt_is_randomized():
    platform = ExtraSpecialPlatform(7, 2)
    pub, _ = mor_keygen(platform, make_rng(0))
    a = platform.random_element(make_rng(1))
    c1, c2 = mor_encrypt(pub, a, make_rng(10)), mor_encrypt(pub, a, make_rng(11))
    assert c1.phi_r != c2.phi_r


def test_decrypt_rejects_mismatch_and_invalid():
    es = ExtraSpecialPlatform(5, 1)
    pub, priv = mor_keygen(es, make_rng(0))
    other_pub, _ = mor_keygen(ExtraSpecialPlatform(7, 1), make_rng(0))
    foreign = mor_encrypt(other_pub, other_pub.platform.identity_element(), make_rng(0))
    with pytest.raises(InvalidInput):
        mor_decrypt(priv, foreign)
    good = mor_encrypt(pub, es.identity_element(), make_rng(0))
    broken = EsAut(MatrixFp.diag([1, 2], 5), [0, 0], 1, es.params)
    with pytest.raises(InvalidInput):
        mor_decrypt(priv, MorCiphertext(es, broken, good.payload))
    with pytest.raises(ValueError):
        mor_decrypt(priv, good, method="bogus")


def test_encrypt_rejects_foreign_element():
    pub, _ = mor_keygen(ExtraSpecialPlatform(5, 1), make_rng(0))
    with pytest.raises(InvalidInput):
        mor_encrypt(pub, EsParams(7, 1).identity(), make_rng(0))
    pub_el, _ = mor_keygen(ElementaryPlatform(5, 2), make_rng(0))
    with pytest.raises(InvalidInput):
        mor_encrypt(pub_el, (1, 2, 3), make_rng(0))


def test_private_key_range_guard():
    platform = ExtraSpecialPlatform(3, 1)
    with pytest.raises(InvalidInput):
        MorPrivateKey(platform, 5, 4, identity_aut(platform.params))


def test_central_and_unipotent_kinds():
    es = ExtraSpecialPlatform(31, 2)
    pub, priv = mor_keygen(es, make_rng(0), kind="central", m=17)
    assert priv.order_phi == 31 and pub.phi.M.is_identity()
    el = ElementaryPlatform(5, 3)
    pub, priv = mor_keygen(el, make_rng(0), kind="unipotent")
    n = pub.phi - MatrixFp.identity(3, 5)
    assert mat_pow_naive(n, 3).is_zero()
    with pytest.raises(InvalidInput):
        mor_keygen(el, make_rng(0), kind="central")


# --- the oracle reduction ----------------------------------------------------------------


def honest_oracle(priv_by_phi_m):
    def oracle(pub, ct):
        # the oracle knows every private key that was ever issued
        m = priv_by_phi_m[write_artifact(MorPublicKey(pub.platform, pub.phi, pub.phi_m))]
        key = MorPrivateKey(pub.platform, m % pub.order(), pub.order(), pub.phi)
        return mor_decrypt(key, ct)

    return oracle


@pytest.mark.parametrize("platform", [ExtraSpecialPlatform(5, 2), ElementaryPlatform(5, 3)], ids=["es", "el"])
def test_dh_from_decryption_oracle(platform):
    rng = make_rng(123)
    phi = platform.sample_phi(rng)
    order = platform.order(phi)
    rnd = random.Random(0)
    for _ in range(20):
        m1, m2 = rnd.randrange(1, order), rnd.randrange(1, order)
        phi_m1, phi_m2 = platform.power(phi, m1), platform.power(phi, m2)
        known = {write_artifact(MorPublicKey(platform, phi, phi_m1)): m1}
        got = dh_from_decryption_oracle(phi_m1, phi_m2, honest_oracle(known), phi=phi)
        assert got == platform.power(phi, m1 * m2)
        assert write_artifact(MorPublicKey(platform, phi, got)) == write_artifact(
            MorPublicKey(platform, phi, platform.power(phi, m1 * m2))
        )


def test_dh_trivial_exponents():
    platform = ExtraSpecialPlatform(3, 1)
    phi = platform.sample_phi(make_rng(0))
    known = {write_artifact(MorPublicKey(platform, phi, phi)): 1}
    assert dh_from_decryption_oracle(phi, phi, honest_oracle(known), phi=phi) == phi


def test_dh_rejects_inconsistent_oracle():
    platform = ExtraSpecialPlatform(3, 1)
    phi = platform.sample_phi(make_rng(0))

    def liar(pub, ct):
        return platform.identity_element()

    with pytest.raises(InvalidInput):
        dh_from_decryption_oracle(phi, phi, liar, phi=phi)


def test_platform_of():
    g = EsParams(5, 2)
    assert platform_of(identity_aut(g)) == ExtraSpecialPlatform(5, 2)
    assert platform_of(MatrixFp.identity(3, 7)) == ElementaryPlatform(7, 3)
    with pytest.raises(TypeError):
        platform_of("nope")


# --- encoding --------------------------------------------------------------------------


def test_encoding_examples():
    platform = ExtraSpecialPlatform(5, 2)
    g = platform.params
    assert encode_message(b"", platform) == g.identity()
    assert encode_message(b"\x01", platform) == g.element([1, 0], [0, 0], 0)
    assert encode_message(b"\x05", platform) == g.element([0, 1], [0, 0], 0)
    with pytest.raises(InvalidInput):
        encode_message((5**5).to_bytes(2, "big"), platform)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(3, 1), (5, 2), (7, 3)]), st.data())
def test_encoding_roundtrip(pn, data):
    platform = ExtraSpecialPlatform(*pn)
    value = data.draw(st.integers(0, platform.capacity - 1))
    msg = value.to_bytes((value.bit_length() + 7) // 8, "big")
    assert decode_message(encode_message(msg, platform), platform) == msg


def test_elementary_encoding_digits():
    platform = ElementaryPlatform(3, 4)
    assert encode_message(bytes([1 + 3 * 2 + 27 * 1]), platform) == (1, 2, 0, 1)


# --- ElGamal ---------------------------------------------------------------------------


def test_elgamal_examples():
    pub, priv = elgamal_keygen(19, 2, make_rng(0), m=4)
    assert (pub.g, pub.h) == (2, 16)
    ct = elgamal_encrypt(pub, 7, make_rng(0), r=3)
    assert ct == (8, 1)
    assert elgamal_decrypt(priv, ct) == 7


def test_elgamal_guards():
    with pytest.raises(InvalidInput):
        elgamal_keygen(19, 1, make_rng(0))
    pub, _ = elgamal_keygen(19, 2, make_rng(0))
    with pytest.raises(InvalidInput):
        elgamal_encrypt(pub, 0, make_rng(0))


@pytest.mark.parametrize("p,g", [(19, 2), (31, 3)])
def test_elgamal_roundtrip_all_messages(p, g):
    rng = make_rng(p)
    for _ in range(50):
        pub, priv = elgamal_keygen(p, g, rng)
        for a in range(1, p):
            assert elgamal_decrypt(priv, elgamal_encrypt(pub, a, rng)) == a
