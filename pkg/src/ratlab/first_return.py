"""First returns of T to ``Omega_alpha = {1/(x - y) < alpha}``.

The visits of the orbit of ``(x_0, y_0) = T(x, inf)`` to Omega_alpha are
exactly the indices ``n`` with ``theta_n < alpha``; :func:`theta_bar` builds
that subsequence twice, once by filtering theta_n and once by walking the
first-return map, and insists the two agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .cf import CFExpansion, theta_at, theta_below
from .errors import DomainViolation, PrecisionExhausted, RatlabError, ReturnNotFound
from .interval import RationalInterval, as_fraction
from .natext import NEPoint, norm, norm_less_than, step, step_from_infinity

__all__ = [
    "Returned", "NoReturnWithinCap", "ThetaBarEntry", "ThetaBarSequence", "Region",
    "in_omega_alpha", "tau", "return_map", "theta_bar", "classify_region",
    "return_ratio", "ConsistencyError",
]

DEFAULT_CAP = 10_000


class ConsistencyError(RatlabError, AssertionError):
    """Two independent computations of the same quantity disagree."""

    code = "ConsistencyError"


@dataclass(frozen=True)
class Returned:
    tau: int
    point: NEPoint


@dataclass(frozen=True)
class NoReturnWithinCap:
    steps: int


def _alpha(alpha) -> Fraction:
    a = as_fraction(alpha)
    if not 0 < a <= 1:
        raise DomainViolation(f"alpha must lie in (0, 1], got {alpha}")
    return a


def in_omega_alpha(p: NEPoint, alpha, index: int | None = None) -> bool:
    """Certified ``||p|| < alpha``."""
    return norm_less_than(p, _alpha(alpha), index=index)


def tau(p: NEPoint, alpha, cap: int = DEFAULT_CAP):
    """First ``n >= 1`` with ``T^n p`` in Omega_alpha.

    Returns :class:`Returned` or :class:`NoReturnWithinCap`. A start point
    ``(x, inf)`` is allowed: its first step is ``T(x, inf)``.
    """
    alpha = _alpha(alpha)
    point = p
    for n in range(1, cap + 1):
        point = step(point, index=n)
        if in_omega_alpha(point, alpha, index=n):
            return Returned(n, point)
    return NoReturnWithinCap(cap)


def return_map(p: NEPoint, alpha, cap: int = DEFAULT_CAP) -> NEPoint:
    """``T_alpha(p) = T^{tau(p)} p``."""
    outcome = tau(p, alpha, cap)
    if isinstance(outcome, NoReturnWithinCap):
        raise ReturnNotFound(f"no return to Omega_{alpha} within {cap} steps", index=cap)
    return outcome.point


@dataclass(frozen=True)
class ThetaBarEntry:
    k: int
    n: int
    theta_bar: RationalInterval
    q_bar: int


@dataclass(frozen=True)
class ThetaBarSequence:
    alpha: Fraction
    entries: tuple[ThetaBarEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> ThetaBarEntry:
        # 1-based, matching theta_bar_k
        if k < 1:
            raise IndexError(k)
        return self.entries[k - 1]

    @property
    def indices(self) -> list[int]:
        return [e.n for e in self.entries]


def _norm_overlaps(p: NEPoint, iv: RationalInterval) -> bool:
    """Whether the interval of ``1/(x - y)`` meets ``iv``; exact, gcd-free."""
    y = p.y
    y_lo, y_hi = (y.lo, y.hi) if isinstance(y, RationalInterval) else (y, y)

    def gap(xv: Fraction, yv: Fraction) -> tuple[int, int]:
        # xv - yv as an unreduced (numerator, denominator) pair
        return (xv.numerator * yv.denominator - yv.numerator * xv.denominator,
                xv.denominator * yv.denominator)

    n_big, d_big = gap(p.x.hi, y_lo)  # smallest norm is 1/(largest gap)
    n_small, d_small = gap(p.x.lo, y_hi)
    t_lo, t_hi = iv.lo, iv.hi
    # 1/gap_big <= t_hi  and  t_lo <= 1/gap_small
    return (d_big * t_hi.denominator <= t_hi.numerator * n_big
            and t_lo.numerator * n_small <= d_small * t_lo.denominator)


def theta_bar(cf: CFExpansion, alpha, count: int, cap: int = DEFAULT_CAP) -> ThetaBarSequence:
    """The first ``count`` terms ``theta_{n_k} < alpha`` (``n_k >= 1``).

    Each term is checked against the norm of ``T_alpha^k(x_0, y_0)``: the
    orbit walker must land at index ``n_k`` and its norm interval must
    overlap the filtered theta interval.
    """
    alpha = _alpha(alpha)
    n_limit = cf.length - 1
    conv = cf.convergents
    point = step_from_infinity(cf.source, index=0)
    position = 0
    entries: list[ThetaBarEntry] = []
    for n in range(1, n_limit + 1):
        if len(entries) == count:
            break
        if not theta_below(cf.source, *conv[n], alpha, index=n):
            continue
        theta_n = theta_at(cf.source, *conv[n])
        remaining = n - position
        outcome = tau(point, alpha, cap=min(cap, remaining))
        if not isinstance(outcome, Returned) or position + outcome.tau != n:
            landed = "none" if not isinstance(outcome, Returned) else position + outcome.tau
            raise ConsistencyError(
                f"T_alpha orbit landed at {landed}, filtered theta at {n}", index=n)
        point, position = outcome.point, n
        if not _norm_overlaps(point, theta_n):
            raise ConsistencyError("orbit norm does not enclose theta_n", index=n)
        entries.append(ThetaBarEntry(len(entries) + 1, n, theta_n, conv[n][1]))
    if len(entries) < count:
        raise PrecisionExhausted(
            f"only {len(entries)} of {count} terms below alpha within "
            f"{cf.length} certified quotients", index=n_limit)
    return ThetaBarSequence(alpha, tuple(entries))


class Region(enum.Enum):
    OmegaPlus = "OmegaPlus"
    OmegaMinus = "OmegaMinus"
    Nabla = "Nabla"


def classify_region(p: NEPoint, alpha, index: int | None = None) -> Region:
    """Which piece of Omega a point is in, for ``1/2 <= alpha <= 1``.

    ``Nabla`` is the complement of Omega_alpha. ``OmegaMinus`` is the part of
    Omega_alpha with ``x > alpha`` and ``y <= alpha x / (alpha - x)``; there
    the first return takes two steps. Everything else returns in one.
    """
    alpha = _alpha(alpha)
    if alpha < Fraction(1, 2):
        raise DomainViolation("region split needs alpha >= 1/2")
    if not in_omega_alpha(p, alpha, index=index):
        return Region.Nabla
    if not p.x.greater_than(alpha, index=index):
        return Region.OmegaPlus
    curve = (p.x * alpha) / (alpha - p.x)
    y = p.y
    y_iv = y if isinstance(y, RationalInterval) else RationalInterval(y)
    if y_iv.less_equal(curve, index=index):
        return Region.OmegaMinus
    return Region.OmegaPlus


def return_ratio(cf: CFExpansion, alpha, k_max: int) -> float:
    """``k / n_k`` at ``k = k_max``: the empirical frequency of returns."""
    seq = theta_bar(cf, alpha, k_max)
    return k_max / seq.entries[-1].n


def log_qbar_rate(seq: ThetaBarSequence) -> float:
    """``log(q_bar_k) / k`` at the last entry."""
    last = seq.entries[-1]
    return math.log(last.q_bar) / last.k
