"""Outward-rounded interval enclosures for the transcendental quantities.

Evaluation uses mpmath's interval context; endpoints are converted to exact
dyadic ``Fraction`` values so every comparison against a rational
threshold is exact.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction

from mpmath import iv

from .errors import InputError

DEFAULT_BITS = 128
MAX_BITS = 1024

_iv_lock = threading.RLock()


@contextmanager
def _precision(bits: int):
    with _iv_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = saved


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if man == 0:
        if exp != 0:
            raise ArithmeticError("interval endpoint is not finite")
        return Fraction(0)
    value = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -value if sign else value


def _ivq(q) -> "iv.mpf":
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def decimal_bounds(lo: Fraction, hi: Fraction, digits: int) -> tuple[str, str]:
    """Decimal strings with ``digits`` significant digits, rounded outward."""
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_FLOOR
        a = Decimal(lo.numerator) / Decimal(lo.denominator)
        ctx.rounding = ROUND_CEILING
        b = Decimal(hi.numerator) / Decimal(hi.denominator)
    return str(a), str(b)


@dataclass(frozen=True)
class RoundedInterval:
    lower: Fraction
    upper: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval")

    @classmethod
    def from_iv(cls, x, bits: int) -> "RoundedInterval":
        a, b = x._mpi_
        return cls(_raw_to_fraction(a), _raw_to_fraction(b), bits)

    def contains(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    def below(self, x) -> bool:
        """Certainly ``< x``."""
        return self.upper < Fraction(x)

    def above(self, x) -> bool:
        """Certainly ``> x``."""
        return self.lower > Fraction(x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def decimals(self, digits: int | None = None) -> tuple[str, str]:
        if digits is None:
            digits = math.ceil(self.precision_bits * math.log10(2))
        return decimal_bounds(self.lower, self.upper, digits)


def ceil_log(n: int) -> int:
    """``ceil(ln n)`` for a positive integer, decided by interval comparison.

    For integer t >= 1, e^t is irrational so ``n == e^t`` never happens and
    the comparison always becomes conclusive at some precision.
    """
    n = int(n)
    if n < 1:
        raise InputError(f"ceil_log needs n >= 1, got {n}")
    if n == 1:
        return 0
    t = max(1, math.ceil(math.log(n)))
    bits = 64 + n.bit_length()
    while True:
        with _precision(bits):
            hi_t = RoundedInterval.from_iv(iv.exp(iv.mpf(t)), bits)
            lo_t = RoundedInterval.from_iv(iv.exp(iv.mpf(t - 1)), bits)
        if hi_t.below(n):
            t += 1
        elif t > 1 and lo_t.above(n):
            t -= 1
        elif hi_t.above(n) and (t == 1 or lo_t.below(n)):
            return t
        else:
            bits *= 2


def default_alpha(n: int) -> int:
    return 3 * ceil_log(n)


def default_m(n: int) -> int:
    c = ceil_log(n)
    return n // (6 * c) if c else 0


def rational_power(base, exponent, bits: int = DEFAULT_BITS) -> RoundedInterval:
    """Enclosure of ``base ** exponent`` for rationals with base > 0."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base <= 0:
        raise InputError("rational_power needs a positive base")
    with _precision(bits):
        x = iv.exp(_ivq(exponent) * iv.log(_ivq(base)))
        return RoundedInterval.from_iv(x, bits)


def t_term(k: int, n: int, precision_bits: int = DEFAULT_BITS) -> RoundedInterval:
    """Enclosure of ``(e/k)^(2k) * n^(-k + 3k(k-1)/n)``."""
    if k < 1 or n < 2:
        raise InputError(f"t_term needs k >= 1 and n >= 2, got k={k}, n={n}")
    expo = Fraction(-k) + Fraction(3 * k * (k - 1), n)
    with _precision(precision_bits):
        log_t = 2 * k * (1 - iv.log(iv.mpf(k))) + _ivq(expo) * iv.log(iv.mpf(n))
        return RoundedInterval.from_iv(iv.exp(log_t), precision_bits)


def nine_e2_ratio(n: int, precision_bits: int = DEFAULT_BITS) -> RoundedInterval:
    """Enclosure of ``9 e^2 / n^(3/2 - 3/n)``."""
    if n < 2:
        raise InputError(f"needs n >= 2, got {n}")
    expo = Fraction(3, 2) - Fraction(3, n)
    with _precision(precision_bits):
        x = iv.exp(2 + iv.log(iv.mpf(9)) - _ivq(expo) * iv.log(iv.mpf(n)))
        return RoundedInterval.from_iv(x, precision_bits)


def e_over_k_squared(k: int, precision_bits: int = DEFAULT_BITS) -> RoundedInterval:
    with _precision(precision_bits):
        x = (iv.e / k) ** 2
        return RoundedInterval.from_iv(x, precision_bits)


@dataclass
class Check:
    name: str
    status: str
    threshold: Fraction
    interval: RoundedInterval | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "threshold": str(self.threshold)}
        if self.interval is not None:
            lo, hi = self.interval.decimals()
            d.update(lower=lo, upper=hi, precision_bits=self.interval.precision_bits)
        if self.detail:
            d["detail"] = self.detail
        return d


def certify_below(name, evaluate, threshold, bits=DEFAULT_BITS, max_bits=MAX_BITS, strict=True) -> Check:
    """Show ``evaluate(bits) < threshold`` (``<=`` if not strict), doubling
    the precision while the enclosure straddles the threshold."""
    threshold = Fraction(threshold)
    while True:
        x = evaluate(bits)
        ok = x.below(threshold) if strict else x.upper <= threshold
        bad = x.lower >= threshold if strict else x.above(threshold)
        if ok:
            return Check(name, "pass", threshold, x)
        if bad:
            return Check(name, "fail", threshold, x)
        if bits >= max_bits:
            return Check(name, "inconclusive", threshold, x)
        bits = min(2 * bits, max_bits)


@dataclass
class ClaimReport:
    n: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def t_term_checks(n: int, ks, bits=DEFAULT_BITS, max_bits=MAX_BITS) -> list:
    return [
        certify_below(f"t_{k} <= (1/2)^{k + 2} at n={n}", lambda b, k=k: t_term(k, n, b),
                      Fraction(1, 2 ** (k + 2)), bits, max_bits, strict=False)
        for k in ks
    ]


def verify_claim_inequalities(n: int, precision_bits: int = DEFAULT_BITS,
                              max_bits: int = MAX_BITS, all_k: bool = True) -> ClaimReport:
    """Certify the inequalities behind ``t_k <= (1/2)^(k+2)`` at this n.

    With ``all_k`` the bound is also checked directly for every
    ``k <= ceil(n/2)``.
    """
    if n < 60:
        raise InputError(f"the claim is stated for n >= 60, got {n}")
    half = Fraction(1, 2)
    checks = [
        certify_below(f"9e^2/n^(3/2-3/n) < 1/2 at n={n}", lambda b: nine_e2_ratio(n, b), half,
                      precision_bits, max_bits),
        certify_below("9e^2/n^(3/2-3/n) < 1/2 at n=60", lambda b: nine_e2_ratio(60, b), half,
                      precision_bits, max_bits),
    ]
    checks += t_term_checks(n, (1, 2, 3), precision_bits, max_bits)
    checks.append(certify_below("(e/4)^2 < 1/2", lambda b: e_over_k_squared(4, b), half,
                                precision_bits, max_bits))

    worst = None
    for k in range(4, n // 3 + 1):
        expo = Fraction(-k) + Fraction(3 * k * (k - 1), n)
        if worst is None or expo > worst:
            worst = expo
    if worst is None:
        checks.append(Check("-k + 3k(k-1)/n <= -1 for 4 <= k <= n/3", "pass", Fraction(-1),
                            detail="empty range"))
    else:
        checks.append(Check("-k + 3k(k-1)/n <= -1 for 4 <= k <= n/3",
                            "pass" if worst <= -1 else "fail", Fraction(-1),
                            detail=f"max exponent {worst}"))

    if all_k:
        top = -(-n // 2)
        failing = [c for c in t_term_checks(n, range(1, top + 1), precision_bits, max_bits)
                   if not c.passed]
        if failing:
            checks.append(Check(f"t_k <= (1/2)^(k+2) for all k <= {top}", failing[0].status,
                                failing[0].threshold, failing[0].interval, detail=failing[0].name))
        else:
            checks.append(Check(f"t_k <= (1/2)^(k+2) for all k <= {top}", "pass", Fraction(0),
                                detail=f"{top} enclosures certified"))
    return ClaimReport(n, checks)
