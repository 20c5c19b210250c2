"""Limit laws for theta_bar: closed forms, density models, and comparisons.

One-dimensional models (conditional Doeblin-Lenstra, uniform) and the
two-dimensional pair density on Lambda_alpha share one interface: a density,
bin/cell masses, and a normalization that is checked by quadrature when the
model is built. Empirical data are binned into :class:`Histogram` objects that
merge associatively, and compared to a model in a :class:`ComparisonReport`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from .errors import DomainViolation, InsufficientSamples
from .natext import LOG2, mu_omega_alpha
from .pairs import (in_lambda, inverse_minus_numeric, inverse_plus_numeric,
                    lambda_minus_mask, minus_boundary)

__all__ = [
    "c_alpha", "levy_limit", "dl_conditional_density", "dl_conditional_cdf",
    "dl_printed_density", "pair_density", "Variant", "DensityModel", "Histogram",
    "ComparisonReport", "empirical_compare", "estimate_levy", "pushforward_cell_masses",
    "select_pair_variant", "MIN_SAMPLES",
]

MIN_SAMPLES = 10_000
NORMALIZATION_TOL = 1e-6


def _alpha(alpha) -> float:
    a = float(alpha)
    if not 0 < a <= 1:
        raise DomainViolation(f"alpha must lie in (0, 1], got {alpha}")
    return a


def c_alpha(alpha) -> float:
    """``1/(log 2 * mu(Omega_alpha))``."""
    return 1.0 / (LOG2 * mu_omega_alpha(_alpha(alpha)))


def levy_limit(alpha) -> float:
    """Almost-sure limit of ``log(q_bar_k)/k``: ``pi^2/(12 log2 mu(Omega_alpha))``."""
    a = _alpha(alpha)
    if a <= 0.5:
        return math.pi ** 2 / (12 * a)
    return math.pi ** 2 / (12 * (1 - a + LOG2 + math.log(a)))


# -- one-dimensional laws ------------------------------------------------------

def _dl_density(zeta):
    zeta = np.asarray(zeta, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(zeta <= 0.5, 1.0, 1.0 / zeta - 1.0) / LOG2


def _dl_cdf(zeta):
    # classical D-L distribution function on [0, 1]; at zeta = alpha it is mu(Omega_alpha)
    zeta = np.clip(np.asarray(zeta, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        upper = (1.0 - zeta + np.log(2.0 * np.maximum(zeta, 0.5))) / LOG2
    return np.where(zeta <= 0.5, zeta / LOG2, upper)


def dl_conditional_density(zeta, alpha):
    """Density of theta_bar: the D-L density restricted to (0, alpha) and renormalized.

    Equals ``1/alpha`` on (0, alpha) for ``alpha <= 1/2``. Zero outside.
    """
    a = _alpha(alpha)
    zeta = np.asarray(zeta, dtype=float)
    inside = (zeta > 0) & (zeta < min(a, 1.0))
    out = np.where(inside, _dl_density(np.where(inside, zeta, 0.25)) / mu_omega_alpha(a), 0.0)
    return out if out.ndim else float(out)


def dl_conditional_cdf(zeta, alpha):
    a = _alpha(alpha)
    out = _dl_cdf(np.minimum(np.asarray(zeta, dtype=float), a)) / mu_omega_alpha(a)
    return out if out.ndim else float(out)


def dl_printed_density(zeta, alpha):
    """``c_alpha (2 log 2)^-1 zeta^-1 (1 - |1 - 2 zeta|)`` on (0, alpha), as printed.

    This is ``c_alpha`` times the D-L density, so its integral is ``1/log 2``
    rather than 1; kept for comparison only.
    """
    a = _alpha(alpha)
    zeta = np.asarray(zeta, dtype=float)
    inside = (zeta > 0) & (zeta < a)
    z = np.where(inside, zeta, 0.25)
    out = np.where(inside, c_alpha(a) / (2 * LOG2) / z * (1 - np.abs(1 - 2 * z)), 0.0)
    return out if out.ndim else float(out)


# -- the pair density ----------------------------------------------------------

class Variant(enum.Enum):
    """Radicand in the pair density: ``4 alpha w z`` or ``4 w z``."""

    AlphaInRadical = "AlphaInRadical"
    PlainRadical = "PlainRadical"

    def factor(self, alpha: float) -> float:
        return alpha if self is Variant.AlphaInRadical else 1.0


def _variant(v) -> Variant:
    return v if isinstance(v, Variant) else Variant(v)


def _pair_density_array(w, z, alpha: float, variant: Variant):
    beta = variant.factor(alpha)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    inside = in_lambda(w, z, alpha)
    r = 4.0 * beta * w * z
    with np.errstate(invalid="ignore", divide="ignore"):
        plus = 1.0 / np.sqrt(1.0 - r)
        minus = np.where(lambda_minus_mask(w, z, alpha), 1.0 / np.sqrt(1.0 + r), 0.0)
    return np.where(inside, c_alpha(alpha) * (plus + minus), 0.0)


def pair_density(w, z, alpha, variant=Variant.PlainRadical):
    """``c_alpha / sqrt(1 - R)`` on Lambda^+, plus ``c_alpha / sqrt(1 + R)`` on Lambda^-.

    ``R = 4 alpha w z`` (AlphaInRadical) or ``4 w z`` (PlainRadical); the two
    coincide at alpha = 1, where Lambda^- is empty.
    """
    a = _alpha(alpha)
    variant = _variant(variant)
    w_arr = np.asarray(w, dtype=float)
    z_arr = np.asarray(z, dtype=float)
    if np.any(~in_lambda(w_arr, z_arr, a)):
        raise DomainViolation("(w, z) outside Lambda_alpha")
    if np.any(4.0 * variant.factor(a) * w_arr * z_arr >= 1.0):
        raise DomainViolation("radicand is not positive")
    out = _pair_density_array(w_arr, z_arr, a, variant)
    return out if out.ndim else float(out)


def _z_integral(w: float, z0, z1, beta: float, sign: float):
    """``int_{z0}^{z1} (1 + sign 4 beta w z)^(-1/2) dz`` in cancellation-free form."""
    s0 = np.sqrt(np.maximum(1.0 + sign * 4.0 * beta * w * z0, 0.0))
    s1 = np.sqrt(np.maximum(1.0 + sign * 4.0 * beta * w * z1, 0.0))
    return np.where(z1 > z0, 2.0 * (z1 - z0) / (s0 + s1 + 1e-300), 0.0)


def _pair_column(w: float, z_lo, z_hi, alpha: float, variant: Variant):
    """Model mass density in w of the z-cells ``[z_lo, z_hi]`` at abscissa w."""
    beta = variant.factor(alpha)
    top = min(alpha, 1.0 - w)
    a = np.clip(z_lo, 0.0, top)
    b = np.clip(z_hi, 0.0, top)
    total = _z_integral(w, a, b, beta, -1.0)
    if w < 1.0 - alpha:
        edge = float(minus_boundary(w, alpha))
        am = np.clip(z_lo, 0.0, edge)
        bm = np.clip(z_hi, 0.0, edge)
        total = total + _z_integral(w, am, bm, beta, 1.0)
    return c_alpha(alpha) * total


def _pair_cell_masses(alpha: float, variant: Variant, w_edges, z_edges) -> np.ndarray:
    w_edges = np.asarray(w_edges, dtype=float)
    z_lo = np.asarray(z_edges[:-1], dtype=float)
    z_hi = np.asarray(z_edges[1:], dtype=float)
    out = np.zeros((len(w_edges) - 1, len(z_lo)))
    for i in range(len(w_edges) - 1):
        w0, w1 = max(w_edges[i], 0.0), min(w_edges[i + 1], alpha)
        if w1 <= w0:
            continue
        out[i], _ = integrate.quad_vec(
            lambda w: _pair_column(w, z_lo, z_hi, alpha, variant), w0, w1,
            epsabs=1e-11, epsrel=1e-9)
    return out


def _pair_total_mass(alpha: float, variant: Variant) -> float:
    def column(w):
        return float(_pair_column(w, np.array([0.0]), np.array([1.0]), alpha, variant)[0])
    points = [p for p in (1.0 - alpha, 0.5) if 0 < p < alpha]
    value, _ = integrate.quad(column, 0.0, alpha, points=points or None,
                              epsabs=1e-12, epsrel=1e-11, limit=200)
    return value


# -- models --------------------------------------------------------------------

@dataclass
class DensityModel:
    """A density with its support, normalized to 1 (checked at construction).

    If the formula as written does not integrate to 1 the model keeps the
    renormalizing constant in ``normalization`` and sets ``renormalized``.
    """

    kind: str
    alpha: float
    variant: Variant | None = None
    lo: float = 0.0
    hi: float = 1.0
    printed: bool = False
    raw_mass: float = field(init=False)
    normalization: float = field(init=False)
    renormalized: bool = field(init=False)

    def __post_init__(self):
        self.raw_mass = self._raw_mass()
        self.renormalized = abs(self.raw_mass - 1.0) > NORMALIZATION_TOL
        self.normalization = 1.0 / self.raw_mass if self.renormalized else 1.0

    # constructors
    @classmethod
    def dl_conditional(cls, alpha, printed: bool = False) -> "DensityModel":
        a = _alpha(alpha)
        return cls("DLConditional", a, hi=a, printed=printed)

    @classmethod
    def pair_jager(cls, alpha, variant=Variant.PlainRadical) -> "DensityModel":
        a = _alpha(alpha)
        if a < 0.5:
            raise DomainViolation("the pair density is defined for alpha >= 1/2")
        return cls("PairJager", a, variant=_variant(variant), hi=a)

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "DensityModel":
        if not hi > lo:
            raise DomainViolation("empty interval")
        return cls("UniformOnInterval", float(hi), lo=float(lo), hi=float(hi))

    @property
    def dims(self) -> int:
        return 2 if self.kind == "PairJager" else 1

    def describe(self) -> str:
        if self.kind == "UniformOnInterval":
            text = f"UniformOnInterval({self.lo:g},{self.hi:g})"
        elif self.kind == "DLConditional":
            text = f"DLConditional({self.alpha:g}{', printed' if self.printed else ''})"
        else:
            text = f"PairJager({self.alpha:g},{self.variant.value})"
        if self.renormalized:
            text += f" [renormalized: raw integral {self.raw_mass:.9g}]"
        return text

    # raw formulas
    def _raw_pdf(self, *args):
        if self.kind == "UniformOnInterval":
            t = np.asarray(args[0], dtype=float)
            return np.where((t >= self.lo) & (t <= self.hi), 1.0 / (self.hi - self.lo), 0.0)
        if self.kind == "DLConditional":
            fn = dl_printed_density if self.printed else dl_conditional_density
            return fn(args[0], self.alpha)
        return _pair_density_array(args[0], args[1], self.alpha, self.variant)

    def _raw_mass(self) -> float:
        if self.kind == "PairJager":
            return _pair_total_mass(self.alpha, self.variant)
        points = [0.5] if self.lo < 0.5 < self.hi else None
        value, _ = integrate.quad(lambda t: float(self._raw_pdf(t)), self.lo, self.hi,
                                  points=points, epsabs=1e-13, epsrel=1e-12)
        return value

    # normalized interface
    def pdf(self, *args):
        return self.normalization * self._raw_pdf(*args)

    def cdf(self, t):
        """Distribution function (1-D models)."""
        if self.dims != 1:
            raise TypeError("cdf is defined for 1-D models")
        t = np.asarray(t, dtype=float)
        if self.kind == "UniformOnInterval":
            return np.clip((t - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        if not self.printed:
            return np.where(t <= 0, 0.0, dl_conditional_cdf(np.maximum(t, 0.0), self.alpha))
        # printed formula: c_alpha times the D-L density, then renormalized
        return np.where(t <= 0, 0.0, self.normalization * c_alpha(self.alpha)
                        * _dl_cdf(np.clip(t, 0.0, self.alpha)))

    def bin_masses(self, edges) -> np.ndarray:
        """Model probability of each 1-D bin."""
        return np.diff(self.cdf(np.asarray(edges, dtype=float)))

    def cell_masses(self, w_edges, z_edges) -> np.ndarray:
        """Model probability of each 2-D cell, ``[i, j]`` for w-bin i, z-bin j."""
        if self.dims != 2:
            raise TypeError("cell_masses is defined for 2-D models")
        return self.normalization * _pair_cell_masses(self.alpha, self.variant, w_edges, z_edges)


# -- the pushforward oracle ----------------------------------------------------

def _jacobian(fn, w, z, h=1e-6):
    # central differences of the inverse branch
    xw1, yw1 = fn(w + h, z)
    xw0, yw0 = fn(w - h, z)
    xz1, yz1 = fn(w, z + h)
    xz0, yz0 = fn(w, z - h)
    dxdw, dydw = (xw1 - xw0) / (2 * h), (yw1 - yw0) / (2 * h)
    dxdz, dydz = (xz1 - xz0) / (2 * h), (yz1 - yz0) / (2 * h)
    return np.abs(dxdw * dydz - dxdz * dydw)


def _pushforward_density(w, z, alpha: float):
    """Density of ``F_* mu_alpha`` at (w, z), from the Omega side only.

    Each inverse branch contributes ``c_alpha (x - y)^-2 |det DH|`` when its
    image is a point of the matching part of Omega_alpha (decided by the
    region test on Omega, not by the Lambda-side curve).
    """
    c = c_alpha(alpha)
    out = np.zeros_like(w)
    for branch, want_minus in ((inverse_plus_numeric, False), (inverse_minus_numeric, True)):
        with np.errstate(invalid="ignore", divide="ignore"):
            x, y = branch(w, z)
            ok = np.isfinite(x) & np.isfinite(y) & (x > 0) & (x < 1) & (y < -1)
            ok &= 1.0 / (x - y) < alpha
            curve = np.where(x > alpha, alpha * x / (alpha - x), -np.inf)
            minus = (x > alpha) & (y <= curve)
            ok &= minus if want_minus else ~minus
            jac = _jacobian(branch, w, z)
            dens = c / (x - y) ** 2 * jac
        # the difference stencil can step past 4wz = 1 next to the corner (1/2, 1/2)
        out += np.where(ok & np.isfinite(dens), dens, 0.0)
    return out


def pushforward_cell_masses(alpha, w_edges, z_edges, sub: int = 24) -> np.ndarray:
    """Cell masses of the pushforward of mu_alpha, by midpoint sub-sampling.

    Every cell is split into ``sub x sub`` pieces; boundaries of Lambda_alpha
    are resolved only to that sub-grid, which bounds the L1 error by about
    (boundary cells) x (cell mass) / sub.
    """
    a = _alpha(alpha)
    w_edges = np.asarray(w_edges, dtype=float)
    z_edges = np.asarray(z_edges, dtype=float)
    out = np.zeros((len(w_edges) - 1, len(z_edges) - 1))
    t = (np.arange(sub) + 0.5) / sub
    for i in range(len(w_edges) - 1):
        w0, w1 = w_edges[i], w_edges[i + 1]
        ws = w0 + (w1 - w0) * t
        z0 = z_edges[:-1, None]
        dz = np.diff(z_edges)[:, None]
        zs = (z0 + dz * t[None, :]).ravel()
        W, Z = np.meshgrid(ws, zs, indexing="ij")
        dens = _pushforward_density(W, Z, a)
        cells = dens.reshape(sub, len(z_edges) - 1, sub).mean(axis=(0, 2))
        out[i] = cells * (w1 - w0) * np.diff(z_edges)
    return out


def select_pair_variant(alpha, grid: int = 50, sub: int = 24) -> dict:
    """Compare both printed radicands with the pushforward oracle on a grid.

    Returns the L1 distance of each variant and the name of the closer one.
    """
    a = _alpha(alpha)
    edges = np.linspace(0.0, a, grid + 1)
    oracle = pushforward_cell_masses(a, edges, edges, sub=sub)
    result = {"alpha": a, "grid": grid, "oracle_mass": float(oracle.sum()), "l1": {}}
    for v in Variant:
        model = DensityModel.pair_jager(a, v)
        masses = model.cell_masses(edges, edges)
        result["l1"][v.value] = float(np.abs(masses - oracle).sum())
        result.setdefault("raw_mass", {})[v.value] = model.raw_mass
    l1 = result["l1"]
    # at alpha = 1 the two radicands are the same function
    result["tie"] = abs(l1["AlphaInRadical"] - l1["PlainRadical"]) < 1e-12
    result["accepted"] = ("PlainRadical" if result["tie"] else min(l1, key=l1.get))
    return result


# -- histograms and comparison ---------------------------------------------------

@dataclass
class Histogram:
    """Counts on fixed bin edges (1-D) or a tensor grid (2-D).

    Values outside the edges go to ``outside`` so that counts always add up to
    ``total``. ``merge`` is associative and commutative.
    """

    edges: tuple
    counts: np.ndarray
    outside: int = 0

    def __post_init__(self):
        self.edges = tuple(np.asarray(e, dtype=float) for e in self.edges)
        for e in self.edges:
            if not np.all(np.diff(e) > 0):
                raise DomainViolation("bin edges must be strictly increasing")
        self.counts = np.asarray(self.counts, dtype=np.int64)

    @property
    def dims(self) -> int:
        return len(self.edges)

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.outside

    @classmethod
    def empty(cls, *edges) -> "Histogram":
        return cls(edges, np.zeros(tuple(len(e) - 1 for e in edges), dtype=np.int64))

    @classmethod
    def from_samples(cls, samples, *edges) -> "Histogram":
        h = cls.empty(*edges)
        h.add(samples)
        return h

    def add(self, samples) -> None:
        samples = np.asarray(samples, dtype=float)
        if self.dims == 1:
            samples = samples.reshape(-1)
            counts, _ = np.histogram(samples, bins=self.edges[0])
            n = len(samples)
        else:
            samples = samples.reshape(-1, 2)
            counts, _, _ = np.histogram2d(samples[:, 0], samples[:, 1], bins=self.edges)
            n = len(samples)
        counts = counts.astype(np.int64)
        self.counts = self.counts + counts
        self.outside += n - int(counts.sum())

    def merge(self, other: "Histogram") -> "Histogram":
        if len(self.edges) != len(other.edges) or not all(
                np.array_equal(a, b) for a, b in zip(self.edges, other.edges)):
            raise DomainViolation("cannot merge histograms with different edges")
        return Histogram(self.edges, self.counts + other.counts, self.outside + other.outside)

    def frequencies(self) -> np.ndarray:
        return self.counts / self.total


@dataclass
class ComparisonReport:
    alpha: float | None
    model: str
    variant: str | None
    samples: int
    l1: float
    ks: float
    expected: float | None = None
    estimate: float | None = None
    rel_err: float | None = None
    seeds: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"alpha": self.alpha, "model": self.model, "variant": self.variant,
               "samples": self.samples, "l1": self.l1, "ks": self.ks,
               "expected": self.expected, "estimate": self.estimate,
               "rel_err": self.rel_err, "seeds": list(self.seeds)}
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        # json writes floats with repr, which round-trips IEEE doubles
        return json.dumps(self.to_dict(), sort_keys=False)


def _grid_ks(freq: np.ndarray, masses: np.ndarray) -> float:
    diff = np.cumsum(np.cumsum(freq - masses, axis=0), axis=1)
    return float(np.max(np.abs(diff)))


def empirical_compare(samples, model: DensityModel, bins, seeds=(), alpha=None,
                      keep_histogram: bool = False) -> ComparisonReport:
    """Histogram ``samples`` and compare them with ``model``.

    ``bins`` is an int (equal bins over the support) or explicit edges; for
    2-D models the same edges are used on both axes. L1 is the sum over bins
    of |empirical probability - model probability|. KS is the exact
    one-sample statistic in 1-D and the bin-corner version in 2-D. With
    ``keep_histogram`` the edges, counts and model masses go into ``extra``.
    """
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < MIN_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_SAMPLES} samples, got {n}")
    if np.isscalar(bins) or np.ndim(bins) == 0:
        edges = np.linspace(model.lo, model.hi, int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
    if model.dims == 1:
        hist = Histogram.from_samples(samples, edges)
        masses = model.bin_masses(edges)
        ks = float(stats.kstest(samples, lambda t: model.cdf(t)).statistic)
    else:
        hist = Histogram.from_samples(samples, edges, edges)
        masses = model.cell_masses(edges, edges)
        ks = _grid_ks(hist.frequencies(), masses)
    l1 = float(np.abs(hist.frequencies() - masses).sum()
               + hist.outside / hist.total)
    extra = {"bins": len(edges) - 1}
    if keep_histogram:
        extra.update({"edges": edges.tolist(), "counts": hist.counts.tolist(),
                      "outside": int(hist.outside), "model_masses": masses.tolist()})
    return ComparisonReport(
        alpha=float(alpha if alpha is not None else model.alpha), model=model.describe(),
        variant=model.variant.value if model.variant else None,
        samples=n, l1=l1, ks=ks, seeds=list(seeds), extra=extra)


def estimate_levy(cf, alpha, k: int, exact_walk: bool = False) -> float:
    """``log(q_bar_k)/k`` with the exact integer ``q_bar_k`` of ``cf``.

    By default the returns are located by the integer orbit scanner; with
    ``exact_walk`` they come from the interval walk of the return map.
    """
    if exact_walk:
        from .first_return import log_qbar_rate, theta_bar
        return log_qbar_rate(theta_bar(cf, alpha, k))
    from .orbit import scan_orbit
    scan = scan_orbit(cf.source, cf.length, [alpha])
    return scan.levy_rate(alpha, k)
