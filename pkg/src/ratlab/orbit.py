"""Fast certified scan of long orbits, for Monte Carlo experiments.

:class:`OrbitScan` walks the orbit of ``(x_0, y_0) = T(x, inf)`` with plain
integers: the Euclidean remainders of both interval endpoints give
``x_n = T^{n+1} x`` and the denominator recurrence gives ``y_n = -q_{n+1}/q_n``.
Only doubles are stored, but every ``theta_n < alpha`` decision is certified:
a float test with a rigorous relative error bound first, and an exact integer
comparison whenever the float test is too close to call.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cf import CertifiedReal, sample_irrational
from .errors import InsufficientSamples, PrecisionExhausted, StraddlesThreshold
from .interval import RationalInterval, as_fraction
from .natext import NEPoint, norm

__all__ = ["OrbitScan", "scan_orbit", "scan_seed", "bits_for_terms", "sample_omega_points"]

# |theta~ - theta| <= REL_ERR * theta for the double evaluation 1/(x~ + |y|~)
# of correctly rounded x~, |y|~ (four roundings, 4u < 9e-16).
REL_ERR = 2e-15

try:
    import gmpy2
    _big = gmpy2.mpz
except ImportError:  # plain ints give the same answers, several times slower
    _big = int

_KEEP_BITS = 96


def _ratio(a, b) -> float:
    """``a / b`` for positive integers from their leading bits.

    Truncating both to at least 96 bits adds a relative error below 2^-94
    before the final rounding, far inside the REL_ERR budget.
    """
    s = min(a.bit_length(), b.bit_length()) - _KEEP_BITS
    if s > 0:
        a, b = a >> s, b >> s
    return int(a) / int(b)


def _log_big(q) -> float:
    bl = q.bit_length()
    if bl <= 1000:
        return math.log(int(q))
    shift = bl - 64
    return math.log(int(q >> shift)) + shift * math.log(2.0)


# Certifying n quotients of a random x needs about 2 log2(q_n) = 3.42 n bits.
BITS_PER_TERM = 3.6
BITS_MARGIN = 512


def bits_for_terms(n_terms: int) -> int:
    return max(64, math.ceil(BITS_PER_TERM * n_terms) + BITS_MARGIN)


@dataclass
class OrbitScan:
    """Per-index data for ``n = 0 .. N-1`` of one certified orbit.

    ``theta[n]``, ``x[n]``, ``y[n]`` are midpoints (doubles) of the certified
    enclosures of ``theta_n``, ``x_n`` and ``y_n``; ``log_q[n] = log q_n``.
    ``below[alpha][n]`` is the certified truth of ``theta_n < alpha``.
    """

    source: RationalInterval = field(repr=False)
    quotients: list[int] = field(repr=False)
    theta: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    log_q: np.ndarray = field(repr=False)
    below: dict[Fraction, np.ndarray] = field(repr=False)
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.theta)

    def _mask(self, alpha) -> np.ndarray:
        alpha = as_fraction(alpha)
        try:
            mask = self.below[alpha]
        except KeyError:
            raise KeyError(f"alpha {alpha} was not certified during the scan") from None
        mask = mask.copy()
        mask[:1] = False  # theta_bar starts at n = 1
        return mask

    def return_indices(self, alpha) -> np.ndarray:
        """``n_1 < n_2 < ...``: indices ``n >= 1`` with ``theta_n < alpha``."""
        return np.flatnonzero(self._mask(alpha))

    def theta_bar(self, alpha, count: int | None = None) -> np.ndarray:
        idx = self.return_indices(alpha)
        if count is not None:
            idx = self._take(idx, count, alpha)
        return self.theta[idx]

    def _take(self, idx: np.ndarray, count: int, alpha) -> np.ndarray:
        if len(idx) < count:
            raise PrecisionExhausted(
                f"only {len(idx)} returns to Omega_{alpha} among {len(self)} indices",
                index=len(self))
        return idx[:count]

    def pairs(self, alpha, count: int | None = None) -> np.ndarray:
        """Rows ``(theta_bar_k, theta_bar_{k+1})``."""
        tb = self.theta_bar(alpha)
        if count is not None:
            if len(tb) < count + 1:
                raise PrecisionExhausted(
                    f"only {max(len(tb) - 1, 0)} pairs available", index=len(self))
            tb = tb[: count + 1]
        return np.column_stack([tb[:-1], tb[1:]])

    def return_points(self, alpha) -> np.ndarray:
        """Rows ``(x, y)`` of ``T_alpha^k (x_0, y_0)``, ``k >= 1``."""
        idx = self.return_indices(alpha)
        return np.column_stack([self.x[idx], self.y[idx]])

    def return_ratio(self, alpha, k: int) -> float:
        """``k / n_k``."""
        idx = self._take(self.return_indices(alpha), k, alpha)
        return k / int(idx[-1])

    def levy_rate(self, alpha, k: int) -> float:
        """``log(q_bar_k) / k``."""
        idx = self._take(self.return_indices(alpha), k, alpha)
        return float(self.log_q[idx[-1]]) / k


def _endpoint_below(r_prev: int, r_cur: int, q_prev: int, q_cur: int, alpha: Fraction) -> bool:
    # theta = r_prev q_prev / (r_cur q_prev + q_cur r_prev) < A/B, exactly
    a, b = alpha.numerator, alpha.denominator
    return b * r_prev * q_prev < a * (r_cur * q_prev + q_cur * r_prev)


def scan_orbit(x: RationalInterval, n_terms: int, alphas=(), seed: int | None = None) -> OrbitScan:
    """Scan ``theta_0 .. theta_{N-1}`` with ``N <= n_terms`` certified indices."""
    alphas = tuple(sorted({as_fraction(a) for a in alphas}))
    alpha_f = [float(a) for a in alphas]
    lo, hi = x.lo, x.hi
    # Euclidean pairs (r_{k-1}, r_k) for both endpoints
    lp, lc = _big(lo.denominator), _big(lo.numerator)
    hp, hc = _big(hi.denominator), _big(hi.numerator)
    q_prev, q_cur = _big(0), _big(1)  # becomes (q_{k-1}, q_k) after step k
    quotients: list[int] = []
    theta, xs, ys, log_q = [], [], [], []
    below = [[] for _ in alphas]
    one_minus, one_plus = 1.0 - REL_ERR, 1.0 + REL_ERR

    for k in range(1, n_terms + 1):
        if not (lc and hc):
            break
        a_lo, r_lo = divmod(lp, lc)
        a_hi, r_hi = divmod(hp, hc)
        if a_lo != a_hi:
            break
        quotients.append(int(a_lo))
        lp, lc = lc, r_lo
        hp, hc = hc, r_hi
        q_prev, q_cur = q_cur, a_lo * q_cur + q_prev
        # index n = k - 1: x_n = r_k / r_{k-1}, y_n = -q_k / q_{k-1}
        ratio = _ratio(q_cur, q_prev)
        x_lo, x_hi = _ratio(lc, lp), _ratio(hc, hp)
        t_lo = 1.0 / (x_lo + ratio)
        t_hi = 1.0 / (x_hi + ratio)
        theta.append(0.5 * (t_lo + t_hi))
        xs.append(0.5 * (x_lo + x_hi))
        ys.append(-ratio)
        log_q.append(_log_big(q_prev))
        if alphas:
            t_min, t_max = (t_lo, t_hi) if t_lo <= t_hi else (t_hi, t_lo)
            for j, (af, alpha) in enumerate(zip(alpha_f, alphas)):
                if t_max * one_plus < af:
                    below[j].append(True)
                elif t_min * one_minus > af:
                    below[j].append(False)
                else:
                    lo_below = _endpoint_below(lp, lc, q_prev, q_cur, alpha)
                    hi_below = _endpoint_below(hp, hc, q_prev, q_cur, alpha)
                    if lo_below != hi_below:
                        raise StraddlesThreshold(
                            f"theta_{k - 1} interval contains alpha = {alpha}", index=k - 1)
                    below[j].append(lo_below)

    n = len(theta)
    return OrbitScan(
        source=x,
        quotients=quotients,
        theta=np.array(theta, dtype=float),
        x=np.array(xs, dtype=float),
        y=np.array(ys, dtype=float),
        log_q=np.array(log_q, dtype=float),
        below={a: np.array(m, dtype=bool).reshape(n) for a, m in zip(alphas, below)},
        seed=seed,
    )


def scan_seed(seed: int, n_terms: int, alphas=(), bits: int | None = None,
              max_retries: int = 4) -> OrbitScan:
    """Scan the orbit of ``sample_irrational(seed, bits)`` to ``n_terms`` indices.

    If the sampled interval certifies too few quotients the same seed is
    redrawn at 1.5x the precision (deterministically).
    """
    bits = bits or bits_for_terms(n_terms)
    for _ in range(max_retries + 1):
        scan = scan_orbit(sample_irrational(seed, bits), n_terms, alphas, seed=seed)
        if len(scan) >= n_terms:
            return scan
        bits = math.ceil(bits * 1.5)
    raise PrecisionExhausted(
        f"seed {seed}: fewer than {n_terms} certified terms at {bits} bits", index=len(scan))


def sample_omega_points(seed: int, count: int, alpha=1, x_bits: int = 256,
                        max_draws: int | None = None) -> list[NEPoint]:
    """Random points of Omega_alpha with dyadic x intervals and rational y.

    ``x`` is uniform on a ``2^-x_bits`` grid and ``y = -1/u`` with ``u``
    uniform on a 64-bit grid; draws outside Omega_alpha (or too close to its
    edge to certify) are rejected.
    """
    alpha = as_fraction(alpha)
    rng = random.Random(seed)
    scale = 1 << x_bits
    out: list[NEPoint] = []
    draws = 0
    max_draws = max_draws or 1000 * count + 1000
    while len(out) < count:
        draws += 1
        if draws > max_draws:
            raise InsufficientSamples(f"rejection sampler gave up after {draws} draws")
        p = rng.randrange(1, scale - 1)
        u = rng.randrange(1, 1 << 64)
        x = CertifiedReal(Fraction(p, scale), Fraction(p + 1, scale), x_bits)
        point = NEPoint(x, Fraction(-(1 << 64), u))
        try:
            inside = norm(point).less_than(alpha)
        except StraddlesThreshold:
            continue
        if inside:
            out.append(point)
    return out
