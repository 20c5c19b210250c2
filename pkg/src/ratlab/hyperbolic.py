"""Ford discs, geodesics in the upper half-plane, and return times read off them.

``D_{p/q}(k)`` is the disc of radius ``k/q^2`` tangent to the real line at
``p/q``; ``D_inf(k)`` is the half-plane above height ``1/(2k)``, which is the
image of ``D_0(k)`` under ``z -> -1/z``. The geodesic through ``y < x`` is the
semicircle over ``[y, x]``.

With ``c = p/q``, ``rho = k/q^2`` and the semicircle of radius ``r = (x-y)/2``
centered at ``m``, the circle meets the disc iff ``|d - r| <= rho`` where
``d^2 = (c - m)^2 + rho^2``. Squaring and using ``(c-m)^2 - r^2 = (c-x)(c-y)``
turns this into the polynomial test

    |(c - x)(c - y)| <= rho (x - y),

which is evaluated exactly on rationals and with interval arithmetic when an
endpoint is only known to lie in an interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cf import CFExpansion, cf_expand, theta_below
from .errors import (DomainViolation, NoIntersectingDiscWithinCap, NotReduced,
                     PrecisionExhausted, StraddlesThreshold)
from .first_return import ConsistencyError
from .interval import RationalInterval, as_fraction, as_interval
from .natext import INF, MobiusMap, NEPoint, mobius_of_prefix, norm_less_than

__all__ = [
    "Disc", "HalfPlane", "Semicircle", "Vertical", "ford_disc", "geodesic",
    "intersects", "mobius_image", "geodesic_image", "geometric_theta_test",
    "dynamic_theta_test", "minimal_disc", "geometric_tau", "finite_return_scan",
    "cf_depth", "DEFAULT_CAP",
]

DEFAULT_CAP = 50


# -- shapes ------------------------------------------------------------------------

@dataclass(frozen=True)
class Disc:
    """``D_{p/q}(kappa)``: center ``(p/q, kappa/q^2)``, radius ``kappa/q^2``."""

    p: int
    q: int
    kappa: Fraction

    @property
    def tangent(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def radius(self) -> Fraction:
        return self.kappa / (self.q * self.q)

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return self.tangent, self.radius


@dataclass(frozen=True)
class HalfPlane:
    """``{v > height}``; for the family of parameter kappa, ``height = 1/(2 kappa)``."""

    height: Fraction

    @property
    def kappa(self) -> Fraction:
        return 1 / (2 * self.height)


@dataclass(frozen=True)
class Semicircle:
    """Geodesic with real endpoints ``left < right`` (rational or interval)."""

    left: object
    right: object

    def __post_init__(self):
        lo_r = self.right.lo if isinstance(self.right, RationalInterval) else self.right
        hi_l = self.left.hi if isinstance(self.left, RationalInterval) else self.left
        if not hi_l < lo_r:
            raise DomainViolation("semicircle needs left < right")

    @property
    def center(self):
        return (self.left + self.right) / 2

    @property
    def radius(self):
        return (self.right - self.left) / 2


@dataclass(frozen=True)
class Vertical:
    """Geodesic from ``foot`` up to infinity."""

    foot: object


def ford_disc(p: int, q: int, kappa) -> Disc:
    kappa = as_fraction(kappa)
    if q < 1 or math.gcd(p, q) != 1:
        raise NotReduced(f"{p}/{q} is not a reduced fraction with q >= 1")
    if not 0 < kappa <= 1:
        raise DomainViolation(f"kappa must lie in (0, 1], got {kappa}")
    return Disc(p, q, kappa)


def geodesic(x, y) -> Semicircle | Vertical:
    """The geodesic joining ``y`` and ``x`` (either may be INF)."""
    if y is INF or (isinstance(y, float) and math.isinf(y)):
        return Vertical(_exact(x))
    if x is INF or (isinstance(x, float) and math.isinf(x)):
        return Vertical(_exact(y))
    x, y = _exact(x), _exact(y)
    xl = x.lo if isinstance(x, RationalInterval) else x
    yh = y.hi if isinstance(y, RationalInterval) else y
    return Semicircle(y, x) if yh < xl else Semicircle(x, y)


def _exact(v):
    if isinstance(v, RationalInterval):
        return Fraction(v.lo) if v.is_point else v
    return as_fraction(v)


# -- the intersection predicate ------------------------------------------------------

def _decide_le(lhs, rhs) -> bool:
    if isinstance(lhs, RationalInterval) or isinstance(rhs, RationalInterval):
        return as_interval(lhs).less_equal(as_interval(rhs))
    return lhs <= rhs


def intersects(g, h) -> bool:
    """Whether geodesic ``g`` meets the closed horocycle ``h``.

    Raises StraddlesThreshold when interval endpoints leave it undecided.
    """
    if isinstance(h, HalfPlane):
        if isinstance(g, Vertical):
            return True
        return _decide_le(2 * h.height, g.right - g.left)
    c, rho = h.tangent, h.radius
    if isinstance(g, Vertical):
        return _decide_le(abs(g.foot - c), rho)
    x, y = g.right, g.left
    lhs = abs((c - x) * (c - y)) if not isinstance(x, RationalInterval) \
        else abs((x - c) * (c - y))
    return _decide_le(lhs, rho * (x - y))


# -- Moebius action ------------------------------------------------------------------

def mobius_image(m: MobiusMap, h):
    """Image of a horocycle: Ford discs of one family are permuted among themselves."""
    if isinstance(h, HalfPlane):
        if m.c == 0:
            return h
        # infinity goes to a/c with gcd(a, c) = 1
        num, den = (m.a, m.c) if m.c > 0 else (-m.a, -m.c)
        return Disc(num, den, h.kappa)
    num = m.a * h.p + m.b * h.q
    den = m.c * h.p + m.d * h.q
    if den == 0:
        return HalfPlane(1 / (2 * h.kappa))
    if den < 0:
        num, den = -num, -den
    return Disc(num, den, h.kappa)


def geodesic_image(m: MobiusMap, g):
    """Image of a geodesic under the boundary action of ``m``."""
    if isinstance(g, Vertical):
        return geodesic(m(g.foot), m(INF))
    return geodesic(m(g.right), m(g.left))


# -- the threshold test ----------------------------------------------------------------

def geometric_theta_test(cf: CFExpansion, n: int, y, alpha) -> bool:
    """Whether the geodesic from ``y`` to ``x`` meets ``D_{p_n/q_n}(alpha)``.

    Equivalent to ``||T^{n+1}(x, y)|| < alpha``.
    """
    y = as_fraction(y)
    if not y < -1:
        raise DomainViolation("y must be below -1")
    p_n, q_n = cf.convergents[n] if n <= cf.length else (None, None)
    if p_n is None:
        raise PrecisionExhausted(f"convergent {n} not certified", index=n)
    return intersects(geodesic(cf.source, y), ford_disc(p_n, q_n, alpha))


def dynamic_theta_test(cf: CFExpansion, n: int, y, alpha) -> bool:
    """``||T^{n+1}(x, y)|| < alpha`` through the Moebius map ``g_{n+1}``."""
    g = mobius_of_prefix(cf, n)
    point = NEPoint(g(cf.source), g(as_fraction(y)))
    return norm_less_than(point, alpha, index=n + 1)


# -- minimal discs and return times ---------------------------------------------------------

def cf_depth(p: int, q: int) -> int:
    """Length of the expansion of ``p/q`` in (0, 1] whose last digit is >= 2 (``1 = [1]``)."""
    if p == 0:
        return 0
    digits = []
    num, den = p, q
    while num:
        a, r = divmod(den, num)
        digits.append(a)
        den, num = num, r
    if len(digits) > 1 and digits[-1] == 1:
        return len(digits) - 1
    return len(digits)


def _convergent_candidates(p: NEPoint, cap: int):
    cf = cf_expand(p.x, cap + 1)
    for n in range(cap + 1):
        if n > cf.length:
            raise PrecisionExhausted(f"convergent {n} of x not certified", index=n)
        yield n, cf.convergents[n]


def _stern_brocot_candidates(p: NEPoint, cap: int, max_nodes: int = 100_000):
    # the path of x in the Stern-Brocot tree of [0, 1], in increasing q
    x = p.x
    yield 0, (0, 1)
    yield 1, (1, 1)
    left, right = (0, 1), (1, 1)
    for _ in range(max_nodes):
        med = (left[0] + right[0], left[1] + right[1])
        depth = cf_depth(*med)
        if depth > cap:
            return
        yield depth, med
        if x.less_than(Fraction(*med)):
            right = med
        else:
            left = med


def _minimal(p: NEPoint, alpha, cap: int, search: str) -> tuple[int, Disc]:
    if p.at_infinity:
        raise DomainViolation("minimal_disc needs a finite y")
    if not norm_less_than(p, alpha):
        raise DomainViolation("point is not in Omega_alpha")
    g = geodesic(p.x, p.y)
    if search == "convergents":
        candidates = _convergent_candidates(p, cap)
    elif search == "stern-brocot":
        candidates = _stern_brocot_candidates(p, cap)
    else:
        raise ValueError(f"unknown search {search!r}")
    for n, (num, den) in candidates:
        disc = ford_disc(num, den, alpha)
        if intersects(g, disc):
            return n, disc
    raise NoIntersectingDiscWithinCap(f"no disc met the geodesic up to depth {cap}", index=cap)


def minimal_disc(p: NEPoint, alpha, cap: int = DEFAULT_CAP, search: str = "convergents") -> Disc:
    """The disc ``D_{p/q}(alpha)`` of least q meeting the geodesic of ``p``.

    ``search="convergents"`` scans ``p_n/q_n`` of x (n = 0, 1, ...), so the
    tie between 0/1 and 1/1 goes to 0/1. ``search="stern-brocot"`` scans every
    fraction of [0, 1] on the Stern-Brocot path of x instead.
    """
    return _minimal(p, as_fraction(alpha), cap, search)[1]


def geometric_tau(p: NEPoint, alpha, cap: int = DEFAULT_CAP, search: str = "convergents") -> int:
    """Return time read from the minimal disc ``D_{p_n/q_n}``.

    1 for ``D_0``, 2 for ``D_1``; otherwise ``n + 1`` when x lies on the side
    of ``p_n/q_n`` given by the parity of n (above for even n, below for
    odd n) and ``n + 2`` when it lies on the other side.
    """
    n, disc = _minimal(p, as_fraction(alpha), cap, search)
    if disc.q == 1:
        return 1 if disc.p == 0 else 2
    below = p.x.less_than(disc.tangent)
    if (n % 2 == 1 and below) or (n % 2 == 0 and not below):
        return n + 1
    return n + 2


# -- finite return scans --------------------------------------------------------------------

def finite_return_scan(cf: CFExpansion, y, alpha, n_max: int) -> list[int]:
    """Indices ``m <= n_max`` with ``||T^m (x, y)|| < alpha``, read off Ford discs.

    With ``y = INF`` the orbit is that of ``(x_0, y_0) = T(x, inf)``, the
    geodesic is vertical and index ``n >= 1`` is a hit of ``D_{p_n/q_n}``,
    i.e. ``theta_n < alpha``. For finite ``y``, index ``m`` is a hit of
    ``D_{p_{m-1}/q_{m-1}}``. Every answer is checked against the arithmetic
    route (``theta_n`` or the Moebius image) and a disagreement raises.
    """
    alpha = as_fraction(alpha)
    at_infinity = y is INF or (isinstance(y, float) and math.isinf(y))
    need = n_max if at_infinity else n_max - 1
    if need > cf.length:
        raise PrecisionExhausted(
            f"scan to {n_max} needs convergent {need}, have {cf.length}", index=cf.length)
    g = geodesic(cf.source, INF if at_infinity else as_fraction(y))
    hits = []
    for m in range(1, n_max + 1):
        n = m if at_infinity else m - 1
        p_n, q_n = cf.convergents[n]
        try:
            geo = intersects(g, ford_disc(p_n, q_n, alpha))
        except StraddlesThreshold as exc:
            raise StraddlesThreshold(str(exc), index=m) from None
        if at_infinity:
            arith = theta_below(cf.source, p_n, q_n, alpha, index=n)
        else:
            arith = dynamic_theta_test(cf, n, y, alpha)
        if geo != arith:
            raise ConsistencyError(f"disc test and arithmetic test disagree at {m}", index=m)
        if geo:
            hits.append(m)
    return hits
