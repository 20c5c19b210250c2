"""Coordinates on the domain of consecutive pairs (theta_bar_k, theta_bar_{k+1}).

For ``1/2 <= alpha <= 1`` the first return to Omega_alpha takes one step on
Omega_alpha^+ and two on Omega_alpha^-, so

    F(x, y) = (||(x, y)||, ||T_alpha(x, y)||)

is an explicit rational map: ``F+ (x,y) = -xy/(x-y)`` on the plus part and
``F- (x,y) = (1-x)(1-y)/(x-y)`` on the minus part. It maps Omega_alpha
injectively onto ``Lambda_alpha = {0<w<alpha, 0<z<alpha, w+z<1}``; the inverse
branches are ``H`` and ``H_minus``.

Two modes: certified (exact intervals, with outward square roots for the
inverses) and vectorized float64. The float formulas below are rearranged to
avoid cancellation, which keeps round trips at the 1e-15 level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainViolation
from .first_return import Region, classify_region
from .interval import RationalInterval, as_fraction, as_interval
from .natext import NEPoint, norm

__all__ = [
    "PairPoint", "LambdaRegion", "pair_map", "F", "H", "H_minus",
    "inverse_plus", "inverse_minus", "inverse_plus_certified", "inverse_minus_certified",
    "pair_map_numeric", "inverse_plus_numeric", "inverse_minus_numeric",
    "lambda_classify", "lambda_minus_mask", "in_lambda", "minus_boundary",
]


@dataclass(frozen=True)
class PairPoint:
    """A point ``(w, z)`` of the pair domain; floats or intervals."""

    w: object
    z: object

    def __post_init__(self):
        w, z = self.w, self.z
        if isinstance(w, RationalInterval) or isinstance(z, RationalInterval):
            w, z = as_interval(w), as_interval(z)
            object.__setattr__(self, "w", w)
            object.__setattr__(self, "z", z)
            ok = w.hi > 0 and z.hi > 0 and (w + z).lo < 1
        else:
            ok = w > 0 and z > 0 and w + z < 1
        if not ok:
            raise DomainViolation(f"({w!r}, {z!r}) is outside 0<w, 0<z, w+z<1")

    def floats(self) -> tuple[float, float]:
        return float(self.w), float(self.z)


class LambdaRegion(enum.Enum):
    Plus = "Plus"
    Minus = "Minus"


def _check_alpha(alpha) -> Fraction:
    a = as_fraction(alpha)
    if not Fraction(1, 2) <= a <= 1:
        raise DomainViolation(f"the pair map needs 1/2 <= alpha <= 1, got {alpha}")
    return a


# -- certified forward map ---------------------------------------------------

def _y_bounds(y):
    if isinstance(y, RationalInterval):
        return y.lo, y.hi
    return y, y


def _f_plus(x: RationalInterval, y) -> RationalInterval:
    # -xy/(x-y) increases in x and decreases in y
    y_lo, y_hi = _y_bounds(y)
    lo = -x.lo * y_hi / (x.lo - y_hi)
    hi = -x.hi * y_lo / (x.hi - y_lo)
    return RationalInterval(lo, hi)


def _f_minus(x: RationalInterval, y) -> RationalInterval:
    # (1-x)(1-y)/(x-y) decreases in x and increases in y
    y_lo, y_hi = _y_bounds(y)
    lo = (1 - x.hi) * (1 - y_lo) / (x.hi - y_lo)
    hi = (1 - x.lo) * (1 - y_hi) / (x.lo - y_hi)
    return RationalInterval(lo, hi)


def pair_map(p: NEPoint, alpha) -> PairPoint:
    """Certified ``F(p) = (||p||, ||T_alpha p||)`` for ``p`` in Omega_alpha."""
    alpha = _check_alpha(alpha)
    region = classify_region(p, alpha)
    if region is Region.Nabla:
        raise DomainViolation("point is not in Omega_alpha")
    z = _f_plus(p.x, p.y) if region is Region.OmegaPlus else _f_minus(p.x, p.y)
    return PairPoint(norm(p), z)


F = pair_map


# -- certified inverses --------------------------------------------------------

def _iv(v) -> RationalInterval:
    if isinstance(v, float):
        return as_interval(as_fraction(v))
    return as_interval(v)


def inverse_plus_certified(q: PairPoint, bits: int = 128) -> NEPoint:
    """Enclosure of ``H(q)``; widths grow by about ``2^-bits``."""
    w, z = _iv(q.w), _iv(q.z)
    disc = 1 - 4 * w * z
    if disc.lo <= 0:
        raise DomainViolation("H needs 4wz < 1")
    s = disc.sqrt(bits)
    x = 2 * z / (1 + s)
    y = (-1 - s) / (2 * w)
    return NEPoint(x, y)


def inverse_minus_certified(q: PairPoint, bits: int = 128) -> NEPoint:
    w, z = _iv(q.w), _iv(q.z)
    s = (1 + 4 * w * z).sqrt(bits)
    x = 1 - 2 * z / (1 + s)
    y = (2 * w - 1 - s) / (2 * w)
    if y.hi >= -1:
        raise DomainViolation("H_minus image leaves Omega (y >= -1)")
    return NEPoint(x, y)


# -- float64 versions ----------------------------------------------------------

def pair_map_numeric(x, y, alpha):
    """Vectorized F. Points outside Omega_alpha map to NaN.

    The branch is chosen by the float region test, so points within rounding
    distance of the curve ``y = alpha x/(alpha - x)`` may land on the other
    branch; both branches agree on that curve, so the image is continuous.
    """
    alpha = float(_check_alpha(alpha))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    w = 1.0 / d
    with np.errstate(divide="ignore", invalid="ignore"):
        curve = np.where(x > alpha, alpha * x / (alpha - x), -np.inf)
    minus = (x > alpha) & (y <= curve)
    z = np.where(minus, (1.0 - x) * (1.0 - y) / d, -x * y / d)
    bad = w >= alpha
    return np.where(bad, np.nan, w), np.where(bad, np.nan, z)


def inverse_plus_numeric(w, z):
    """Vectorized ``H(w, z)``; NaN where ``4wz >= 1``."""
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    with np.errstate(invalid="ignore"):
        s = np.sqrt(1.0 - 4.0 * w * z)
    return 2.0 * z / (1.0 + s), -(1.0 + s) / (2.0 * w)


def inverse_minus_numeric(w, z):
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    s = np.sqrt(1.0 + 4.0 * w * z)
    return 1.0 - 2.0 * z / (1.0 + s), (2.0 * w - 1.0 - s) / (2.0 * w)


def inverse_plus(q: PairPoint) -> tuple[float, float]:
    """``H(w, z) = ((1 - sqrt(1-4wz))/2w, (-1 - sqrt(1-4wz))/2w)``."""
    w, z = q.floats()
    if 4 * w * z >= 1:
        raise DomainViolation("H needs 4wz < 1")
    x, y = inverse_plus_numeric(w, z)
    return float(x), float(y)


def inverse_minus(q: PairPoint, alpha=None) -> tuple[float, float]:
    """``H_minus(w, z) = ((2w+1 - sqrt(1+4wz))/2w, (2w-1 - sqrt(1+4wz))/2w)``.

    With ``alpha`` given, ``q`` must lie in Lambda_alpha^-.
    """
    if alpha is not None and lambda_classify(q, alpha) is not LambdaRegion.Minus:
        raise DomainViolation(f"{q} is not in Lambda_alpha^- for alpha = {alpha}")
    x, y = inverse_minus_numeric(*q.floats())
    if not y < -1:
        raise DomainViolation("H_minus image leaves Omega (y >= -1)")
    return float(x), float(y)


H = inverse_plus
H_minus = inverse_minus


# -- regions of Lambda_alpha ------------------------------------------------------

def minus_boundary(w, alpha):
    """``b(w) = w - alpha + sqrt(1 - 4 alpha w)``; NaN where the root is undefined.

    For ``alpha >= 1/2`` it decreases from ``1 - alpha`` at ``w = 0`` to ``0``
    at ``w = 1 - alpha``, so ``Lambda^- = {w < 1-alpha, z < b(w)}``.
    """
    alpha = float(alpha)
    w = np.asarray(w, dtype=float)
    with np.errstate(invalid="ignore"):
        return w - alpha + np.sqrt(1.0 - 4.0 * alpha * w)


def lambda_minus_mask(w, z, alpha):
    """Vectorized ``z < b(w)`` (False where ``4 alpha w > 1``)."""
    b = minus_boundary(w, alpha)
    with np.errstate(invalid="ignore"):
        return np.asarray(z, dtype=float) < np.nan_to_num(b, nan=-np.inf)


def lambda_classify(q: PairPoint, alpha) -> LambdaRegion:
    w, z = q.floats()
    if 4 * float(alpha) * w > 1:
        return LambdaRegion.Plus
    if z < w - float(alpha) + math.sqrt(1 - 4 * float(alpha) * w):
        return LambdaRegion.Minus
    return LambdaRegion.Plus


def in_lambda(w, z, alpha):
    """Vectorized membership in ``{0<w<alpha, 0<z<alpha, w+z<1}``."""
    alpha = float(alpha)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    return (w > 0) & (z > 0) & (w < alpha) & (z < alpha) & (w + z < 1)
