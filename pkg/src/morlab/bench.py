"""Desk-scale timing harness.

Two suites:

* ``expo``: square-and-multiply against the Frobenius-form power for random
  invertible and companion matrices, plus the numba kernel against the numpy
  kernel on the same square-and-multiply.
* ``protocol``: MOR encrypt/decrypt on extra-special groups against ElGamal in
  F_q^* with q the first prime at or above the group order.

Every timed pair first has to agree on its output (the correctness gate).
Times are medians over ``reps`` repetitions.
"""
from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import _kernels
from ._rng import make_rng, rand_below
from .algebra import FpElem, factor_integer, is_prime, mult_order, random_irreducible
from .errors import InvalidInput
from .matrix import companion, mat_pow_lg, mat_pow_naive, random_invertible
from .protocol import (
    ExtraSpecialPlatform,
    elgamal_decrypt,
    elgamal_encrypt,
    elgamal_keygen,
    mor_decrypt,
    mor_encrypt,
    mor_keygen,
)

EXPO_DIMS = (4, 8, 16)
EXPO_P = 13
EXPO_BITS = 256
PROTOCOL_GRID = ((3, 1), (5, 2), (7, 2), (11, 3))
MAX_BENCH_DIM = 64


class GateFailure(AssertionError):
    """Two paths that must agree produced different results."""


@dataclass(frozen=True)
class BenchConfig:
    suite: str = "expo"
    sizes: tuple = ()
    reps: int = 5
    seed: int = 0
    p: int = EXPO_P
    exp_bits: int = EXPO_BITS

    def __post_init__(self):
        if self.suite not in ("expo", "protocol"):
            raise InvalidInput(f"unknown suite {self.suite!r}")
        if self.reps < 1:
            raise InvalidInput("reps must be at least 1")


@dataclass(frozen=True)
class BenchRow:
    op: str
    params: str
    exp_bits: int
    reps: int
    seconds: float
    baseline: str
    baseline_seconds: float

    @property
    def ratio(self) -> float:
        """seconds / baseline_seconds (below 1 means faster than the baseline)."""
        return self.seconds / self.baseline_seconds if self.baseline_seconds > 0 else float("inf")


@dataclass
class BenchReport:
    suite: str
    rows: list[BenchRow] = field(default_factory=list)
    gate_checks: int = 0

    def table(self) -> str:
        head = f"{'op':<22} {'params':<22} {'bits':>5} {'reps':>4} {'median s':>11} {'baseline':<22} {'ratio':>7}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.op:<22} {r.params:<22} {r.exp_bits:>5} {r.reps:>4} {r.seconds:>11.3e} {r.baseline:<22} {r.ratio:>7.3f}"
            )
        lines.append(f"correctness gate: {self.gate_checks} checks passed")
        return "\n".join(lines)

    def to_json(self) -> str:
        rows = [dict(asdict(r), ratio=r.ratio) for r in self.rows]
        return json.dumps({"suite": self.suite, "gate_checks": self.gate_checks, "rows": rows}, indent=2)


def _median_time(fn: Callable[[], object], reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _gate(report: BenchReport, left, right, what: str):
    if left != right:
        raise GateFailure(f"correctness gate failed: {what}")
    report.gate_checks += 1


def _expo(config: BenchConfig, report: BenchReport) -> None:
    dims = config.sizes or EXPO_DIMS
    p, reps = config.p, config.reps
    rng = make_rng(config.seed)
    for d in dims:
        d = int(d)
        if not 1 <= d <= MAX_BENCH_DIM:
            raise InvalidInput(f"dimension {d} outside [1, {MAX_BENCH_DIM}]")
        e = (1 << (config.exp_bits - 1)) | rand_below(rng, 1 << (config.exp_bits - 1))
        cases = [
            ("random", random_invertible(d, p, rng)),
            ("companion", companion(random_irreducible(d, p, rng))),
        ]
        for label, m in cases:
            tag = f"d={d} p={p} {label}"
            _gate(report, mat_pow_naive(m, e), mat_pow_lg(m, e), f"naive vs lg, {tag}")
            naive = _median_time(lambda: mat_pow_naive(m, e), reps)
            lg = _median_time(lambda: mat_pow_lg(m, e), reps)
            report.rows.append(BenchRow("mat_pow_naive", tag, config.exp_bits, reps, naive, "mat_pow_naive", naive))
            report.rows.append(BenchRow("mat_pow_lg", tag, config.exp_bits, reps, lg, "mat_pow_naive", naive))
        if _kernels.NUMBA_ENABLED:
            a = cases[0][1].a
            bits = _kernels.exponent_bits(e)
            _gate(
                report,
                _kernels.nb_matpow_bits(a, bits, p).tolist(),
                _kernels.np_matpow_bits(a, bits, p).tolist(),
                f"numba vs numpy, d={d}",
            )
            t_np = _median_time(lambda: _kernels.np_matpow_bits(a, bits, p), reps)
            t_nb = _median_time(lambda: _kernels.nb_matpow_bits(a, bits, p), reps)
            tag = f"d={d} p={p} random"
            report.rows.append(BenchRow("matpow[numpy]", tag, config.exp_bits, reps, t_np, "matpow[numpy]", t_np))
            report.rows.append(BenchRow("matpow[numba]", tag, config.exp_bits, reps, t_nb, "matpow[numpy]", t_np))


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def primitive_root(q: int) -> int:
    order = factor_integer(q - 1)
    for g in range(2, q):
        if mult_order(FpElem(g, q), order) == q - 1:
            return g
    return 1


def _parse_grid(sizes) -> tuple:
    if not sizes:
        return PROTOCOL_GRID
    out = []
    for s in sizes:
        if isinstance(s, str):
            p, _, n = s.partition(",")
            s = (int(p), int(n))
        out.append(tuple(int(x) for x in s))
    return tuple(out)


def _protocol(config: BenchConfig, report: BenchReport) -> None:
    rng = make_rng(config.seed)
    reps = config.reps
    for p, n in _parse_grid(config.sizes):
        platform = ExtraSpecialPlatform(p, n)
        pub, priv = mor_keygen(platform, rng)
        a = platform.random_element(rng)
        ct = mor_encrypt(pub, a, rng)
        _gate(report, mor_decrypt(priv, ct), a, f"MOR roundtrip p={p} n={n}")
        q = next_prime(platform.params.order)
        g = primitive_root(q)
        epub, epriv = elgamal_keygen(q, g, rng)
        msg = 1 + rand_below(rng, q - 1)
        ect = elgamal_encrypt(epub, msg, rng)
        _gate(report, elgamal_decrypt(epriv, ect), msg, f"ElGamal roundtrip q={q}")
        bits = pub.order().bit_length()
        tag = f"p={p} n={n} q={q}"
        t_eg_enc = _median_time(lambda: elgamal_encrypt(epub, msg, rng), reps)
        t_eg_dec = _median_time(lambda: elgamal_decrypt(epriv, ect), reps)
        t_enc = _median_time(lambda: mor_encrypt(pub, a, rng), reps)
        t_dec = _median_time(lambda: mor_decrypt(priv, ct), reps)
        report.rows.append(BenchRow("elgamal_encrypt", tag, q.bit_length(), reps, t_eg_enc, "elgamal_encrypt", t_eg_enc))
        report.rows.append(BenchRow("mor_encrypt", tag, bits, reps, t_enc, "elgamal_encrypt", t_eg_enc))
        report.rows.append(BenchRow("elgamal_decrypt", tag, q.bit_length(), reps, t_eg_dec, "elgamal_decrypt", t_eg_dec))
        report.rows.append(BenchRow("mor_decrypt", tag, bits, reps, t_dec, "elgamal_decrypt", t_eg_dec))


def bench_suite(config: BenchConfig) -> BenchReport:
    report = BenchReport(config.suite)
    (_expo if config.suite == "expo" else _protocol)(config, report)
    return report


__all__ = ["BenchConfig", "BenchReport", "BenchRow", "GateFailure", "bench_suite", "next_prime", "primitive_root"]
