"""The natural extension of the Gauss map on Omega = (0,1) x (-inf, -1).

``T(x, y) = (1/x - a, 1/y - a)`` with ``a = floor(1/x)``. The x-coordinate
carries the future digits, y the reversed past ones; T preserves the
probability measure ``(log 2)^-1 (x - y)^-2 dx dy``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cf import CFExpansion
from .errors import (DomainViolation, IndexBeyondCertified, IntegerYBoundary,
                     PrecisionExhausted, StraddlesThreshold)
from .interval import RationalInterval, as_fraction, as_interval, fraction_from_coprime

__all__ = [
    "INF", "NEPoint", "MobiusMap", "step", "step_from_infinity", "inverse_step",
    "mobius_of_prefix", "norm", "norm_less_than", "mu_omega_alpha", "measure_rectangle",
    "orbit",
]

LOG2 = math.log(2.0)

#: Marker for the starting point ``(x, infinity)``.
INF = math.inf


def _coerce_y(y):
    if isinstance(y, float) and y == INF:
        return INF
    if isinstance(y, RationalInterval):
        return Fraction(y.lo) if y.is_point else y
    return as_fraction(y)


@dataclass(frozen=True)
class NEPoint:
    """A point of Omega. ``x`` is an interval; ``y`` exact, an interval, or INF.

    ``y == -1`` lies on the boundary of Omega and is admitted only with
    ``boundary=True``; ``step_from_infinity`` produces it when ``a_1 = 1``.
    """

    x: RationalInterval
    y: object
    boundary: bool = False

    def __post_init__(self):
        x = as_interval(self.x)
        object.__setattr__(self, "x", x)
        y = _coerce_y(self.y)
        object.__setattr__(self, "y", y)
        if not (0 < x.lo and x.hi < 1):
            raise DomainViolation(f"x outside (0, 1): {x!r}")
        if y is INF:
            return
        top = y.hi if isinstance(y, RationalInterval) else y
        if top > -1 or (top == -1 and not self.boundary):
            raise DomainViolation(f"y not below -1: {y!r}")

    @property
    def at_infinity(self) -> bool:
        return self.y is INF

    def floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


def _recip_minus(v, a: int):
    if isinstance(v, RationalInterval):
        return v.reciprocal() - a
    return 1 / v - a


def step(p: NEPoint, index: int | None = None) -> NEPoint:
    """One application of T. Fails if the digit ``floor(1/x)`` is uncertain."""
    if p.at_infinity:
        return step_from_infinity(p.x, index=index)
    if isinstance(p.y, Fraction):
        return _fast_step(p, index)
    a = _digit(p.x, index)
    return NEPoint(_tail(p.x, a, index), _recip_minus(p.y, a))


def _gauss_tail(v: Fraction, a: int) -> Fraction:
    # 1/v - a for v = n/d in lowest terms is (d - a n)/n, again in lowest terms
    n, d = v.numerator, v.denominator
    return fraction_from_coprime(d - a * n, n)


def _fast_step(p: NEPoint, index) -> NEPoint:
    """``step`` for a point with exact rational y, without gcd work."""
    lo, hi = p.x.lo, p.x.hi
    if lo <= 0:
        raise PrecisionExhausted("x touches 0; no further digits", index=index)
    a = hi.denominator // hi.numerator
    if lo.denominator // lo.numerator != a:
        raise PrecisionExhausted(f"interval straddles the integer {a + 1}", index=index)
    t_lo = _gauss_tail(hi, a)
    if t_lo <= 0:
        raise PrecisionExhausted("tail touches 0; orbit cannot continue", index=index)
    x = RationalInterval._make(t_lo, _gauss_tail(lo, a))
    n, d = p.y.numerator, p.y.denominator
    # 1/y - a = (d - a n)/n with n < 0
    y = fraction_from_coprime(a * n - d, -n)
    return NEPoint(x, y)


def _digit(x: RationalInterval, index) -> int:
    if x.lo <= 0:
        raise PrecisionExhausted("x touches 0; no further digits", index=index)
    return x.reciprocal().floor(index=index)


def _tail(x: RationalInterval, a: int, index) -> RationalInterval:
    t = x.reciprocal() - a
    if t.lo <= 0:
        raise PrecisionExhausted("tail touches 0; orbit cannot continue", index=index)
    return t


def step_from_infinity(x: RationalInterval, index: int | None = None) -> NEPoint:
    """``T(x, inf) = (1/x - a_1, -a_1)``."""
    x = as_interval(x)
    a = _digit(x, index)
    return NEPoint(_tail(x, a, index), Fraction(-a), boundary=(a == 1))


def inverse_step(p: NEPoint) -> NEPoint:
    """``T^-1(x, y) = (1/(x + a), 1/(y + a))`` with ``a = floor(-y)``."""
    if p.at_infinity:
        raise DomainViolation("inverse_step needs a finite y")
    y = p.y
    if isinstance(y, RationalInterval):
        try:
            a = (-y).floor()
        except PrecisionExhausted as exc:
            raise IntegerYBoundary(f"floor(-y) uncertain for {y!r}") from exc
        if (-y).lo == a:
            raise IntegerYBoundary(f"y interval touches the integer {-a}")
        return NEPoint((p.x + a).reciprocal(), (y + a).reciprocal())
    if y.denominator == 1:
        raise IntegerYBoundary(f"y = {y} is an integer")
    a = math.floor(-y)
    return NEPoint((p.x + a).reciprocal(), 1 / (y + a))


@dataclass(frozen=True)
class MobiusMap:
    """``z -> (a z + b) / (c z + d)`` with integer entries and det = +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise DomainViolation(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def preserves_orientation(self) -> bool:
        return self.det == 1

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d)

    def inverse(self) -> "MobiusMap":
        s = self.det
        return MobiusMap(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def pole(self):
        """Preimage of infinity."""
        return INF if self.c == 0 else Fraction(-self.d, self.c)

    def __call__(self, z):
        if isinstance(z, RationalInterval):
            pole = self.pole()
            if pole is not INF and z.lo <= pole <= z.hi:
                raise DomainViolation(f"interval {z!r} contains the pole {pole}")
            return RationalInterval.hull(self(z.lo), self(z.hi))
        if z is INF:
            return INF if self.c == 0 else Fraction(self.a, self.c)
        z = as_fraction(z)
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def apply_point(self, p: NEPoint) -> NEPoint:
        return NEPoint(self(p.x), self(p.y))


def mobius_of_prefix(cf: CFExpansion, n: int) -> MobiusMap:
    """The map ``g_{n+1}`` equal to ``T^{n+1}`` on the depth-(n+1) cylinder."""
    if n < 0 or n + 1 > cf.length:
        raise IndexBeyondCertified(
            f"prefix map {n} needs {n + 1} certified quotients", index=n)
    p0, q0 = cf.convergents[n]
    p1, q1 = cf.convergents[n + 1]
    return MobiusMap(q1, -p1, -q0, p0)


def norm(p: NEPoint) -> RationalInterval:
    """``||(x, y)|| = 1/(x - y)``, exact."""
    if p.at_infinity:
        raise DomainViolation("norm is undefined at y = infinity")
    return (p.x - p.y).reciprocal()


def norm_less_than(p: NEPoint, alpha, index: int | None = None) -> bool:
    """Certified ``||p|| < alpha``, decided by integer cross-multiplication.

    ``1/(x - y) < A/B`` is ``A (x - y) > B``; the smallest and largest values
    of ``x - y`` over the enclosure settle it unless alpha is inside.
    """
    if p.at_infinity:
        raise DomainViolation("norm is undefined at y = infinity")
    alpha = as_fraction(alpha)
    a, b = alpha.numerator, alpha.denominator
    y_lo, y_hi = (p.y.lo, p.y.hi) if isinstance(p.y, RationalInterval) else (p.y, p.y)

    def above(xv: Fraction, yv: Fraction) -> bool:
        # A (xv - yv) > B
        n = xv.numerator * yv.denominator - yv.numerator * xv.denominator
        return a * n > b * xv.denominator * yv.denominator

    if above(p.x.lo, y_hi):
        return True
    if not above(p.x.hi, y_lo):
        return False
    raise StraddlesThreshold(f"cannot decide ||p|| < {alpha}", index=index)


def orbit(p: NEPoint, n: int) -> list[NEPoint]:
    """``[p, T p, ..., T^n p]``."""
    out = [p]
    for i in range(n):
        out.append(step(out[-1], index=i + 1))
    return out


def mu_omega_alpha(alpha) -> float:
    """Probability ``mu(Omega_alpha)`` of ``{1/(x - y) < alpha}``."""
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise DomainViolation(f"alpha must lie in (0, 1], got {alpha}")
    if alpha <= 0.5:
        return alpha / LOG2
    return (1.0 - alpha + LOG2 + math.log(alpha)) / LOG2


def measure_rectangle(x0: float, x1: float, y0: float, y1: float) -> float:
    """``mu([x0, x1] x [y0, y1])`` for a rectangle inside Omega."""
    if not (0 <= x0 <= x1 <= 1 and y0 <= y1 <= -1):
        raise DomainViolation("rectangle not inside the closure of Omega")
    if math.isinf(y0):
        return math.log((x1 - y1) / (x0 - y1)) / LOG2
    return math.log((x0 - y0) * (x1 - y1) / ((x0 - y1) * (x1 - y0))) / LOG2
