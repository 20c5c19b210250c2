"""Closed intervals with exact rational endpoints.

All arithmetic is exact (``fractions.Fraction``), so enclosures are sound
without any directed rounding. Scalars (``int`` or ``Fraction``) mix freely
with intervals. Comparisons that cannot be decided over the whole interval
raise :class:`~ratlab.errors.StraddlesThreshold`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import DomainViolation, PrecisionExhausted, StraddlesThreshold

BigRational = Fraction


if hasattr(Fraction, "_from_coprime_ints"):  # 3.12+
    def fraction_from_coprime(n: int, d: int) -> Fraction:
        """``n/d`` for coprime ints with ``d > 0``, skipping the gcd."""
        return Fraction._from_coprime_ints(n, d)
else:
    def fraction_from_coprime(n: int, d: int) -> Fraction:
        """``n/d`` for coprime ints with ``d > 0``, skipping the gcd."""
        return Fraction(n, d, _normalize=False)


def ratio_less(n1: int, d1: int, n2: int, d2: int) -> bool:
    """``n1/d1 < n2/d2`` for positive denominators, by cross-multiplication."""
    return n1 * d2 < n2 * d1


def as_fraction(v) -> Fraction:
    """Exact conversion; floats are converted through their decimal repr."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DomainViolation(f"not a finite value: {v!r}")
        return Fraction(repr(v))
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


class RationalInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _make(cls, lo: Fraction, hi: Fraction) -> "RationalInterval":
        # unchecked constructor for the hot paths
        iv = object.__new__(RationalInterval)
        iv.lo = lo
        iv.hi = hi
        return iv

    @classmethod
    def hull(cls, a, b) -> "RationalInterval":
        a, b = as_fraction(a), as_fraction(b)
        return cls._make(a, b) if a <= b else cls._make(b, a)

    # -- basic properties ---------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_point:
            return f"RationalInterval({self.lo})"
        return f"RationalInterval(~{float(self.lo):.17g}, ~{float(self.hi):.17g})"

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalInterval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def contains(self, v) -> bool:
        if isinstance(v, RationalInterval):
            return self.lo <= v.lo and v.hi <= self.hi
        return self.lo <= v <= self.hi

    __contains__ = contains

    def overlaps(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self):
        return RationalInterval._make(-self.hi, -self.lo)

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval._make(self.lo + other.lo, self.hi + other.hi)
        other = as_fraction(other)
        return RationalInterval._make(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval._make(self.lo - other.hi, self.hi - other.lo)
        other = as_fraction(other)
        return RationalInterval._make(self.lo - other, self.hi - other)

    def __rsub__(self, other):
        other = as_fraction(other)
        return RationalInterval._make(other - self.hi, other - self.lo)

    def __mul__(self, other):
        if isinstance(other, RationalInterval):
            products = (self.lo * other.lo, self.lo * other.hi,
                        self.hi * other.lo, self.hi * other.hi)
            return RationalInterval._make(min(products), max(products))
        other = as_fraction(other)
        if other >= 0:
            return RationalInterval._make(self.lo * other, self.hi * other)
        return RationalInterval._make(self.hi * other, self.lo * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise DomainViolation(f"reciprocal of an interval containing 0: {self!r}")
        return RationalInterval._make(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, RationalInterval):
            return self * other.reciprocal()
        other = as_fraction(other)
        if other == 0:
            raise ZeroDivisionError("interval division by zero")
        return self * (1 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * as_fraction(other)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval._make(Fraction(0), max(-self.lo, self.hi))

    def square(self) -> "RationalInterval":
        a = abs(self)
        return RationalInterval._make(a.lo * a.lo, a.hi * a.hi)

    def sqrt(self, bits: int = 128) -> "RationalInterval":
        """Outward-rounded enclosure of the square root on a 2^-bits grid."""
        if self.lo < 0:
            raise DomainViolation(f"sqrt of an interval with negative part: {self!r}")
        scale = 1 << bits
        lo_scaled = self.lo * scale * scale
        hi_scaled = self.hi * scale * scale
        lo = math.isqrt(lo_scaled.numerator // lo_scaled.denominator)
        hi_int = -(-hi_scaled.numerator // hi_scaled.denominator)
        hi = math.isqrt(hi_int)
        if hi * hi < hi_int:
            hi += 1
        return RationalInterval._make(Fraction(lo, scale), Fraction(hi, scale))

    # -- certified decisions ------------------------------------------------

    def floor(self, index: int | None = None) -> int:
        """The common integer part of every point, or PrecisionExhausted."""
        a = math.floor(self.lo)
        if math.floor(self.hi) != a:
            raise PrecisionExhausted(
                f"interval straddles the integer {a + 1}", index=index)
        return a

    def less_than(self, v, index: int | None = None) -> bool:
        """Certified ``self < v`` for every point of both operands."""
        v_lo, v_hi = (v.lo, v.hi) if isinstance(v, RationalInterval) else (v, v)
        if self.hi < v_lo:
            return True
        if self.lo >= v_hi:
            return False
        raise StraddlesThreshold(
            f"cannot decide {self!r} < {v!r}", index=index)

    def less_equal(self, v, index: int | None = None) -> bool:
        v_lo, v_hi = (v.lo, v.hi) if isinstance(v, RationalInterval) else (v, v)
        if self.hi <= v_lo:
            return True
        if self.lo > v_hi:
            return False
        raise StraddlesThreshold(
            f"cannot decide {self!r} <= {v!r}", index=index)

    def greater_than(self, v, index: int | None = None) -> bool:
        return not self.less_equal(v, index=index)


def as_interval(v) -> RationalInterval:
    if isinstance(v, RationalInterval):
        return v
    f = as_fraction(v)
    return RationalInterval._make(f, f)
