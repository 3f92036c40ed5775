"""MOR public-key cryptosystem on elementary-abelian and extra-special p-groups.

Arithmetic lives in :mod:`morlab.algebra` (F_p, polynomials, extension fields),
:mod:`morlab.matrix` (matrices over F_p, Frobenius form, fast powering),
:mod:`morlab.pgroup` and :mod:`morlab.aut` (the extra-special group and its
automorphisms).  :mod:`morlab.protocol` implements MOR and ElGamal,
:mod:`morlab.cryptanalysis` the attacks, :mod:`morlab.cli` the ``morlab`` tool.
"""
from .algebra import ExtField, FpElem, Poly, factor_integer, is_irreducible, is_prime
from .artifacts import parse_artifact, write_artifact
from .aut import EsAut, aut_compose, aut_inverse, aut_order, aut_pow, aut_validate
from .bench import BenchConfig, BenchReport, bench_suite
from .cryptanalysis import (
    DlogAnswer,
    DlogInstance,
    bsgs,
    central_aut_attack,
    menezes_wu_dlog,
    pohlig_hellman,
    unipotent_dlog,
)
from .errors import CapExceededError, InvalidInput, MorlabError, NoSolutionError
from .matrix import MatrixFp, char_poly, companion, frobenius_normal_form, mat_pow_lg, mat_pow_naive, min_poly
from .pgroup import EsElement, EsParams
from .protocol import (
    ElementaryPlatform,
    ExtraSpecialPlatform,
    MorCiphertext,
    MorPrivateKey,
    MorPublicKey,
    dh_from_decryption_oracle,
    elgamal_decrypt,
    elgamal_encrypt,
    elgamal_keygen,
    mor_decrypt,
    mor_encrypt,
    mor_keygen,
)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "BenchReport",
    "CapExceededError",
    "DlogAnswer",
    "DlogInstance",
    "ElementaryPlatform",
    "EsAut",
    "EsElement",
    "EsParams",
    "ExtField",
    "ExtraSpecialPlatform",
    "FpElem",
    "InvalidInput",
    "MatrixFp",
    "MorCiphertext",
    "MorPrivateKey",
    "MorPublicKey",
    "MorlabError",
    "NoSolutionError",
    "Poly",
    "aut_compose",
    "aut_inverse",
    "aut_order",
    "aut_pow",
    "aut_validate",
    "bench_suite",
    "bsgs",
    "central_aut_attack",
    "char_poly",
    "companion",
    "dh_from_decryption_oracle",
    "elgamal_decrypt",
    "elgamal_encrypt",
    "elgamal_keygen",
    "factor_integer",
    "frobenius_normal_form",
    "is_irreducible",
    "is_prime",
    "mat_pow_lg",
    "mat_pow_naive",
    "menezes_wu_dlog",
    "min_poly",
    "mor_decrypt",
    "mor_encrypt",
    "mor_keygen",
    "parse_artifact",
    "pohlig_hellman",
    "unipotent_dlog",
    "write_artifact",
]
