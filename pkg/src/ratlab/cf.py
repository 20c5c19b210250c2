"""Certified continued-fraction engine.

An irrational number in (0, 1) is never held as a float. It is a
:class:`CertifiedReal`, a rational interval known to contain it, and every
derived quantity (partial quotients, approximation coefficients, tails) is
certified for *every* point of that interval or the computation fails with
:class:`~ratlab.errors.PrecisionExhausted`.

Conventions: ``x = [a_1, a_2, ...]``, convergents ``p_k/q_k = [a_1..a_k]``
with ``p_0/q_0 = 0/1``, and ``theta_n = q_n |q_n x - p_n|``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources

from .errors import DomainViolation, IndexBeyondCertified, PrecisionExhausted, StraddlesThreshold
from .interval import RationalInterval, as_fraction, fraction_from_coprime

__all__ = [
    "CertifiedReal", "CFExpansion", "ThetaSequence",
    "sample_irrational", "from_decimal", "golden_ratio", "fig1_constant",
    "cf_expand", "theta_seq", "tail_and_reversal", "cylinder_interval",
    "euclid_quotients",
]


class CertifiedReal(RationalInterval):
    """An irrational in (0, 1) known only through an enclosing interval.

    ``bits`` records the working precision: the interval width is at most
    ``2**-bits`` (exactly that for dyadic samples).
    """

    __slots__ = ("bits",)

    def __init__(self, lo, hi, bits: int):
        super().__init__(lo, hi)
        if self.lo == self.hi:
            raise DomainViolation("a CertifiedReal must enclose an irrational; got a point")
        if not (0 < self.lo and self.hi < 1):
            raise DomainViolation(f"interval not inside (0, 1): [{self.lo}, {self.hi}]")
        self.bits = int(bits)

    def __repr__(self) -> str:
        return f"CertifiedReal(~{float(self.mid):.17g}, bits={self.bits})"


def sample_irrational(seed: int, bits: int) -> CertifiedReal:
    """Uniform random dyadic interval ``[p/2^bits, (p+1)/2^bits]``.

    ``p`` is drawn uniformly from ``{1, ..., 2^bits - 2}`` by the Mersenne
    Twister (``random.Random(seed)``, MT19937). Same seed, same interval.
    """
    if bits < 64:
        raise DomainViolation(f"bits must be >= 64, got {bits}")
    rng = random.Random(seed)
    p = rng.randrange(1, (1 << bits) - 1)
    return CertifiedReal(Fraction(p, 1 << bits), Fraction(p + 1, 1 << bits), bits)


def _parse_digits(digits: str, chunk: int = 4000) -> int:
    # int() refuses very long strings on interpreters with a digit limit
    value = 0
    for i in range(0, len(digits), chunk):
        part = digits[i:i + chunk]
        value = value * 10 ** len(part) + int(part)
    return value


def from_decimal(text: str, fractional_part: bool = False) -> CertifiedReal:
    """Interval ``[s, s + 10^-d]`` for a truncated decimal literal ``s``.

    The literal is plain ASCII: digits with exactly one ``'.'`` and no
    exponent. With ``fractional_part=True`` the integer part is dropped,
    which leaves every ``theta_n`` unchanged.
    """
    text = text.strip()
    whole, dot, frac = text.partition(".")
    if not dot or not frac.isdigit() or (whole and not whole.isdigit()):
        raise DomainViolation(f"not a plain decimal literal: {text[:40]!r}")
    d = len(frac)
    scale = 10 ** d
    numerator = _parse_digits(frac)
    if not fractional_part:
        numerator += _parse_digits(whole or "0") * scale
    lo = Fraction(numerator, scale)
    return CertifiedReal(lo, lo + Fraction(1, scale), bits=int(d * math.log2(10)))


def golden_ratio(bits: int) -> CertifiedReal:
    """Enclosure of ``(sqrt(5) - 1)/2`` of width ``2^-(bits+1)``."""
    s = math.isqrt(5 << (2 * bits))
    one = 1 << bits
    den = 1 << (bits + 1)
    return CertifiedReal(Fraction(s - one, den), Fraction(s + 1 - one, den), bits + 1)


def fig1_constant() -> CertifiedReal:
    """Fractional part of pi^2 + sqrt(2) - 1 from the shipped digit file."""
    text = resources.files("ratlab.constants").joinpath("fig1_x.txt").read_text("ascii")
    digits = "".join(line.strip() for line in text.splitlines()
                     if line.strip() and not line.startswith("#"))
    return from_decimal(digits, fractional_part=True)


def euclid_quotients(lo: Fraction, hi: Fraction, max_terms: int) -> list[int]:
    """Longest common prefix of the Gauss-map digits of ``lo`` and ``hi``."""
    a_den, a_num = lo.denominator, lo.numerator
    b_den, b_num = hi.denominator, hi.numerator
    out: list[int] = []
    while len(out) < max_terms and a_num and b_num:
        qa, ra = divmod(a_den, a_num)
        qb, rb = divmod(b_den, b_num)
        if qa != qb:
            break
        out.append(qa)
        a_den, a_num = a_num, ra
        b_den, b_num = b_num, rb
    return out


@dataclass(frozen=True)
class CFExpansion:
    """Certified prefix ``a_1..a_m`` of the expansion of ``source``."""

    quotients: tuple[int, ...]
    source: RationalInterval = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.quotients)

    def __len__(self) -> int:
        return len(self.quotients)

    @cached_property
    def convergents(self) -> tuple[tuple[int, int], ...]:
        """``(p_k, q_k)`` for ``k = 0..m``, starting at ``0/1``."""
        p_prev, q_prev = 1, 0
        p, q = 0, 1
        out = [(p, q)]
        for a in self.quotients:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
            out.append((p, q))
        return tuple(out)

    def convergent(self, k: int) -> Fraction:
        self._check(k, self.length, "convergent")
        p, q = self.convergents[k]
        return Fraction(p, q)

    def _check(self, n: int, limit: int, what: str) -> None:
        if n < 0 or n > limit:
            raise IndexBeyondCertified(
                f"{what} index {n} beyond certified range 0..{limit}", index=n)


def cf_expand(x: RationalInterval, max_terms: int = 10**9) -> CFExpansion:
    """Certified partial quotients of every point of ``x``.

    Runs the Euclidean algorithm on both endpoints and keeps the common
    prefix; a degenerate interval (a rational) yields its finite expansion.
    """
    if not (0 < x.lo and x.hi < 1):
        raise DomainViolation(f"interval not inside (0, 1): {x!r}")
    quotients = euclid_quotients(x.lo, x.hi, max_terms)
    if not quotients and max_terms > 0:
        raise PrecisionExhausted("no certified first quotient", index=1)
    return CFExpansion(tuple(quotients), x)


@dataclass(frozen=True)
class ThetaSequence:
    """Enclosures of ``theta_0 .. theta_{n_max}``."""

    values: tuple[RationalInterval, ...]

    def __getitem__(self, n: int) -> RationalInterval:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def _reduced(num: int, den: int) -> Fraction:
    if den & (den - 1) == 0:
        # dyadic denominator: the gcd is a power of two
        shift = min((num & -num).bit_length() - 1, den.bit_length() - 1) if num else 0
        return fraction_from_coprime(num >> shift, den >> shift)
    return Fraction(num, den)


def theta_at(x: RationalInterval, p: int, q: int) -> RationalInterval:
    """Exact ``q |q v - p|`` at both endpoints ``v`` of ``x``."""
    ends = []
    for v in (x.lo, x.hi):
        num, den = v.numerator, v.denominator
        ends.append(_reduced(q * abs(q * num - p * den), den))
    return RationalInterval.hull(*ends)


def theta_below(x: RationalInterval, p: int, q: int, alpha, index: int | None = None) -> bool:
    """Certified ``q |q x - p| < alpha`` over ``x``, in integer arithmetic."""
    alpha = as_fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    below = [b * q * abs(q * v.numerator - p * v.denominator) < a * v.denominator
             for v in (x.lo, x.hi)]
    if below[0] != below[1]:
        raise StraddlesThreshold(f"theta_{index} interval contains {alpha}", index=index)
    return below[0]


def theta_seq(cf: CFExpansion, n_max: int) -> ThetaSequence:
    """``theta_n = q_n |q_n x - p_n|`` as exact intervals, ``n = 0..n_max``.

    Within a certified cylinder ``q_n x - p_n`` keeps its sign, so theta_n
    is affine in ``x`` and the endpoint values bound it.
    """
    cf._check(n_max, cf.length, "theta")
    conv = cf.convergents
    return ThetaSequence(tuple(theta_at(cf.source, *conv[n]) for n in range(n_max + 1)))


def _mobius_interval(a: int, b: int, c: int, d: int, x: RationalInterval) -> RationalInterval:
    ends = [Fraction(a * v.numerator + b * v.denominator,
                     c * v.numerator + d * v.denominator) for v in (x.lo, x.hi)]
    return RationalInterval.hull(*ends)


def reversed_fraction(quotients) -> Fraction:
    """``[a_n, ..., a_1]`` for ``quotients = (a_1, ..., a_n)``; 0 if empty."""
    num, den = 0, 1
    for a in quotients:
        num, den = den, a * den + num
    return Fraction(num, den)


def tail_and_reversal(cf: CFExpansion, n: int) -> tuple[RationalInterval, Fraction]:
    """Coordinates of ``T^n(x_0, y_0)``: the tail ``x_n`` and the past ``y_n``.

    ``x_n = [a_{n+2}, ...]`` is the image of ``x`` under
    ``(q_{n+1} x - p_{n+1}) / (p_n - q_n x)``; ``y_n = -a_{n+1} - [a_n..a_1]``.
    """
    if n < 0 or n + 2 > cf.length:
        raise IndexBeyondCertified(
            f"tail index {n} needs {n + 2} certified quotients, have {cf.length}", index=n)
    p0, q0 = cf.convergents[n]
    p1, q1 = cf.convergents[n + 1]
    x_n = _mobius_interval(q1, -p1, -q0, p0, cf.source)
    y_n = -cf.quotients[n] - reversed_fraction(cf.quotients[:n])
    return x_n, y_n


def cylinder_interval(cf: CFExpansion, n: int) -> tuple[Fraction, Fraction]:
    """Endpoints of the depth-(n+1) cylinder containing ``x`` (unordered)."""
    if n < 0 or n + 1 > cf.length:
        raise IndexBeyondCertified(
            f"cylinder index {n} needs {n + 1} certified quotients", index=n)
    p0, q0 = cf.convergents[n]
    p1, q1 = cf.convergents[n + 1]
    return Fraction(p1, q1), Fraction(p1 + p0, q1 + q0)
