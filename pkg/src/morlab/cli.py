"""``morlab`` command line.

Exit status: 0 on success, 2 for usage, file-format and invariant errors,
3 when an attack or solver refuses the input or finds no answer.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from ._rng import make_rng
from .algebra import is_irreducible
from .artifacts import parse_artifact, write_artifact
from .aut import EsAut
from .bench import BenchConfig, bench_suite
from .cryptanalysis import (
    DlogAnswer,
    central_aut_attack,
    fp_instance,
    menezes_wu_dlog,
    pohlig_hellman,
    unipotent_dlog,
)
from .errors import CapExceededError, InvalidInput, NoSolutionError
from .matrix import char_poly
from .protocol import (
    ElementaryPlatform,
    ExtraSpecialPlatform,
    MorCiphertext,
    MorPrivateKey,
    MorPublicKey,
    decode_message,
    encode_message,
    mor_decrypt,
    mor_encrypt,
    mor_keygen,
)

EXIT_OK, EXIT_USAGE, EXIT_ATTACK = 0, 2, 3
LIFT_CAP = 10**6


class AttackRefused(Exception):
    """Raised for inputs an attack cannot handle; maps to exit status 3."""


def _load(path: str, want: type):
    obj = parse_artifact(Path(path).read_text())
    if not isinstance(obj, want):
        raise InvalidInput(f"{path}: expected {want.__name__}, found {type(obj).__name__}")
    return obj


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _matrix_part(phi):
    return phi.M if isinstance(phi, EsAut) else phi


def cmd_keygen(args) -> int:
    if args.platform == "extraspecial":
        if args.n is None or args.d is not None:
            raise InvalidInput("extraspecial keys need --n (and no --d)")
        platform = ExtraSpecialPlatform(args.p, args.n)
    else:
        if args.d is None or args.n is not None:
            raise InvalidInput("elementary keys need --d (and no --n)")
        platform = ElementaryPlatform(args.p, args.d)
    pub, priv = mor_keygen(platform, make_rng(args.seed), kind=args.kind, m=args.m)
    _write(args.pub, write_artifact(pub))
    _write(args.priv, write_artifact(priv))
    print(f"wrote {args.pub} and {args.priv} (order of phi: {priv.order_phi})")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pub = _load(args.pub, MorPublicKey)
    message = encode_message(Path(args.inp).read_bytes(), pub.platform)
    ct = mor_encrypt(pub, message, make_rng(args.seed))
    _write(args.out, write_artifact(ct))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    priv = _load(args.priv, MorPrivateKey)
    ct = _load(args.inp, MorCiphertext)
    Path(args.out).write_bytes(decode_message(mor_decrypt(priv, ct), priv.platform))
    return EXIT_OK


def _run_attack(kind: str, pub: MorPublicKey) -> DlogAnswer:
    try:
        if kind == "central":
            return central_aut_attack(pub)
        g, h = _matrix_part(pub.phi), _matrix_part(pub.phi_m)
        if kind == "menezes-wu":
            return menezes_wu_dlog(g, h)
        return unipotent_dlog(g, h)
    except InvalidInput as exc:
        raise AttackRefused(str(exc)) from exc


def lift_exponent(pub: MorPublicKey, ans: DlogAnswer) -> int:
    """The m in [0, order) with m = residue (mod modulus) and phi^m = phi_m."""
    platform, order = pub.platform, pub.order()
    step = math.gcd(ans.modulus, order)
    tries = order // step
    if tries > LIFT_CAP:
        raise CapExceededError(f"lifting needs {tries} trials (cap {LIFT_CAP})")
    m = ans.residue % step
    for _ in range(tries):
        if platform.power(pub.phi, m) == pub.phi_m:
            return m
        m += step
    raise NoSolutionError("no exponent below the order of phi matches the residue")


def cmd_attack(args) -> int:
    pub = _load(args.pub, MorPublicKey)
    ct = _load(args.target, MorCiphertext) if args.target else None
    ans = _run_attack(args.kind, pub)
    print(ans)
    if ct is not None:
        m = lift_exponent(pub, ans)
        priv = MorPrivateKey(pub.platform, m, pub.order(), pub.phi)
        plain = decode_message(mor_decrypt(priv, ct), pub.platform)
        print(f"m = {m}")
        print(f"plaintext (hex): {plain.hex()}")
    return EXIT_OK


def cmd_dlog(args) -> int:
    print(pohlig_hellman(fp_instance(args.g, args.h, args.p)))
    return EXIT_OK


def cmd_inspect(args) -> int:
    pub = _load(args.pub, MorPublicKey)
    platform = pub.platform
    chi = char_poly(_matrix_part(pub.phi))
    if isinstance(platform, ExtraSpecialPlatform):
        print(f"platform: extraspecial p={platform.p} n={platform.n} (|G| = {platform.params.order})")
    else:
        print(f"platform: elementary p={platform.p} d={platform.d} (|G| = {platform.capacity})")
    print(f"chi_phi: {chi}")
    print(f"irreducible: {'yes' if is_irreducible(chi) else 'no'}")
    print(f"order: {pub.order()}")
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = tuple(args.sizes or ())
    if args.suite == "expo":
        sizes = tuple(int(s) for s in sizes)
    report = bench_suite(BenchConfig(args.suite, sizes, args.reps, args.seed))
    print(report.table())
    if args.json:
        _write(args.json, report.to_json() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="morlab", description="MOR cryptosystem toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("keygen", help="generate a key pair")
    k.add_argument("--platform", choices=("extraspecial", "elementary"), required=True)
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--n", type=int)
    k.add_argument("--d", type=int)
    k.add_argument("--seed", type=int)
    k.add_argument("--pub", required=True)
    k.add_argument("--priv", required=True)
    k.add_argument("--kind", choices=("irreducible", "central", "unipotent"), default="irreducible")
    k.add_argument("--m", type=int, help="force the private exponent (testing)")
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("encrypt", help="encrypt a message file")
    e.add_argument("--pub", required=True)
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int)
    e.set_defaults(func=cmd_encrypt)

    d = sub.add_parser("decrypt", help="decrypt a ciphertext file")
    d.add_argument("--priv", required=True)
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decrypt)

    a = sub.add_parser("attack", help="recover the private exponent from a public key")
    a.add_argument("--kind", choices=("central", "menezes-wu", "unipotent"), required=True)
    a.add_argument("--pub", required=True)
    a.add_argument("--target", help="ciphertext to decrypt with the recovered exponent")
    a.set_defaults(func=cmd_attack)

    g = sub.add_parser("dlog", help="discrete logarithm in F_p^*")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--g", type=int, required=True)
    g.add_argument("--h", type=int, required=True)
    g.set_defaults(func=cmd_dlog)

    i = sub.add_parser("inspect", help="describe a public key")
    i.add_argument("--pub", required=True)
    i.set_defaults(func=cmd_inspect)

    b = sub.add_parser("bench", help="timing comparisons")
    b.add_argument("--suite", choices=("expo", "protocol"), default="expo")
    b.add_argument("--sizes", nargs="*", help="dimensions (expo) or p,n pairs (protocol)")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", help="also write the rows as JSON to this file")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except AttackRefused as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ATTACK
    except (NoSolutionError, CapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ATTACK
    except (InvalidInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
