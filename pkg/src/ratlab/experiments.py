"""Seeded experiments behind the command line and the acceptance tests.

Every function here is deterministic given its arguments. Work over seeds can
be spread across processes (``RATLAB_THREADS``); results are gathered in seed
order, so the output does not depend on the worker count.
"""

from __future__ import annotations

import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .cf import cf_expand, fig1_constant, from_decimal, golden_ratio, tail_and_reversal
from .distributions import (ComparisonReport, DensityModel, Variant, empirical_compare,
                            levy_limit, select_pair_variant)
from .errors import PrecisionExhausted, RatlabError
from .first_return import NoReturnWithinCap, Returned, tau
from .hyperbolic import finite_return_scan, geometric_tau
from .interval import as_fraction
from .natext import INF, NEPoint, mu_omega_alpha
from .orbit import bits_for_terms, sample_omega_points, scan_orbit, scan_seed
from .pairs import in_lambda

__all__ = [
    "worker_count", "map_seeds", "load_constant", "pair_rows", "terms_for_returns",
    "levy_and_ratio", "levy_report",
    "ratio_report", "theta_bar_samples", "pair_samples", "dl_hist_report",
    "pair_hist_reports", "geom_check", "hurwitz_scan", "PRESETS",
]

PRESETS = ("fig1", "golden")
DEFAULT_TERMS = 5000
GOLDEN_BITS = 3000


def worker_count() -> int:
    env = os.environ.get("RATLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_seeds(fn, seeds, *args):
    """``[fn(seed, *args) for seed in seeds]``, possibly in worker processes."""
    seeds = list(seeds)
    workers = min(worker_count(), len(seeds))
    if workers <= 1:
        return [fn(s, *args) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds, *[[a] * len(seeds) for a in args]))


def load_constant(preset: str | None = None, decimal: str | None = None,
                  path: str | None = None, bits: int = GOLDEN_BITS):
    """The input number of an experiment as a certified interval."""
    if preset == "fig1":
        return fig1_constant()
    if preset == "golden":
        return golden_ratio(bits)
    if preset is not None:
        raise ValueError(f"unknown preset {preset!r}; choose from {PRESETS}")
    if decimal is not None:
        return from_decimal(decimal, fractional_part=True)
    if path is not None:
        with open(path, encoding="ascii") as fh:
            text = "".join(line.strip() for line in fh
                           if line.strip() and not line.startswith("#"))
        return from_decimal(text, fractional_part=True)
    raise ValueError("no input constant given")


# -- theta pairs for a single number -----------------------------------------------

def pair_rows(x, alphas, count: int) -> dict:
    """``{alpha: array of (k, w, z)}`` with ``count`` rows for each alpha.

    All pairs are certified to lie in Lambda_alpha: both coordinates are
    certified below alpha by the scan, and ``w + z < 1`` is checked on the
    doubles (the closest pairs are still ~1e-3 away from that edge).
    """
    alphas = [as_fraction(a) for a in alphas]
    scan = scan_orbit(x, 10 ** 9, alphas)
    out = {}
    for a in alphas:
        pairs = scan.pairs(a, count)
        if not np.all(in_lambda(pairs[:, 0], pairs[:, 1], float(a))):
            raise PrecisionExhausted("a pair left Lambda_alpha", index=None)
        k = np.arange(1, count + 1)
        out[a] = np.column_stack([k, pairs])
    return out


# -- per-seed statistics -------------------------------------------------------------

def terms_for_returns(alphas, k: int) -> int:
    """Orbit length that comfortably holds ``k`` returns for every alpha."""
    # expected n_k is k / mu(Omega_alpha); leave a 10% margin plus a constant
    return max(int(1.1 * k / mu_omega_alpha(float(a))) + 200 for a in alphas)


def _levy_and_ratio(seed: int, alphas, k: int):
    n_terms = terms_for_returns(alphas, k)
    scan = scan_seed(seed, n_terms, alphas)
    return {a: (scan.levy_rate(a, k), scan.return_ratio(a, k)) for a in alphas}


def levy_and_ratio(alphas, k: int, seeds) -> dict:
    alphas = [as_fraction(a) for a in alphas]
    per_seed = map_seeds(_levy_and_ratio, seeds, alphas, k)
    return {a: [d[a] for d in per_seed] for a in alphas}


def _orbit_budget(alphas, k: int) -> dict:
    n = terms_for_returns(alphas, k)
    return {"terms_per_seed": n, "bits": bits_for_terms(n)}


def levy_report(alpha, k: int, seeds, values=None) -> ComparisonReport:
    """Median over seeds of ``log(q_bar_k)/k`` against the closed form."""
    alpha = as_fraction(alpha)
    if values is None:
        values = [v[0] for v in levy_and_ratio([alpha], k, seeds)[alpha]]
    est = statistics.median(values)
    exp = levy_limit(alpha)
    return ComparisonReport(
        alpha=float(alpha), model="LevyLimit", variant=None, samples=len(values),
        l1=None, ks=None, expected=exp, estimate=est, rel_err=abs(est - exp) / exp,
        seeds=list(seeds), extra={"k": k, "per_seed": list(values),
                                  **_orbit_budget([alpha], k)})


def ratio_report(alpha, k: int, seeds, values=None) -> ComparisonReport:
    """Median over seeds of ``k/n_k`` against ``mu(Omega_alpha)``."""
    alpha = as_fraction(alpha)
    if values is None:
        values = [v[1] for v in levy_and_ratio([alpha], k, seeds)[alpha]]
    est = statistics.median(values)
    exp = mu_omega_alpha(alpha)
    return ComparisonReport(
        alpha=float(alpha), model="ReturnFrequency", variant=None, samples=len(values),
        l1=None, ks=None, expected=exp, estimate=est, rel_err=abs(est - exp) / exp,
        seeds=list(seeds), extra={"k": k, "abs_err": abs(est - exp), "per_seed": list(values),
                                  **_orbit_budget([alpha], k)})


# -- large samples over many seeds ---------------------------------------------------

def _seed_theta_bar(seed: int, alphas, n_terms: int):
    scan = scan_seed(seed, n_terms, alphas)
    return {a: scan.theta_bar(a) for a in alphas}


def _gather(count: int, alpha, n_terms: int, per_seed, first_seed: int, transform):
    mu = mu_omega_alpha(float(alpha))
    chunks, have, seed = [], 0, first_seed
    seeds_used = []
    while have < count:
        need = count - have
        batch = max(1, math.ceil(1.05 * need / (mu * n_terms)))
        seeds = list(range(seed, seed + batch))
        for s, res in zip(seeds, map_seeds(per_seed, seeds, [alpha], n_terms)):
            arr = transform(res[alpha])
            chunks.append(arr)
            have += len(arr)
            seeds_used.append(s)
            if have >= count:
                break
        seed += batch
    return np.concatenate(chunks)[:count], seeds_used


def theta_bar_samples(alpha, count: int, n_terms: int = DEFAULT_TERMS, first_seed: int = 1):
    """``count`` values of theta_bar, from orbits of seeds ``first_seed, ...``."""
    return _gather(count, as_fraction(alpha), n_terms, _seed_theta_bar, first_seed,
                   lambda tb: tb)


def pair_samples(alpha, count: int, n_terms: int = DEFAULT_TERMS, first_seed: int = 1):
    """``count`` pairs ``(theta_bar_k, theta_bar_{k+1})``; pairs never span two seeds."""
    return _gather(count, as_fraction(alpha), n_terms, _seed_theta_bar, first_seed,
                   lambda tb: np.column_stack([tb[:-1], tb[1:]]))


def dl_hist_report(alpha, samples: int, bins: int = 100, n_terms: int = DEFAULT_TERMS,
                   first_seed: int = 1) -> ComparisonReport:
    """theta_bar histogram against the conditional D-L law (uniform for alpha <= 1/2)."""
    alpha = as_fraction(alpha)
    data, seeds = theta_bar_samples(alpha, samples, n_terms, first_seed)
    if alpha <= Fraction(1, 2):
        model = DensityModel.uniform(0.0, float(alpha))
    else:
        model = DensityModel.dl_conditional(alpha)
    report = empirical_compare(data, model, bins, seeds=seeds, alpha=float(alpha),
                               keep_histogram=True)
    report.extra.update({"terms_per_seed": n_terms, "bits": bits_for_terms(n_terms)})
    return report


def pair_hist_reports(alpha, samples: int, grid: int = 50, n_terms: int = DEFAULT_TERMS,
                      first_seed: int = 1, oracle: bool = True) -> list[ComparisonReport]:
    """2-D pair histogram against both radicand variants of the pair density.

    With ``oracle`` each report also carries the pushforward-oracle L1 of its
    variant and which variant the oracle accepts.
    """
    alpha = as_fraction(alpha)
    data, seeds = pair_samples(alpha, samples, n_terms, first_seed)
    choice = select_pair_variant(alpha, grid=grid) if oracle else None
    reports = []
    for v in Variant:
        model = DensityModel.pair_jager(alpha, v)
        rep = empirical_compare(data, model, grid, seeds=seeds, alpha=float(alpha))
        rep.extra.update({"terms_per_seed": n_terms, "bits": bits_for_terms(n_terms),
                          "raw_mass": model.raw_mass})
        if choice is not None:
            rep.extra.update({"oracle_l1": choice["l1"][v.value],
                              "oracle_accepted": choice["accepted"],
                              "oracle_tie": choice["tie"]})
        reports.append(rep)
    return reports


# -- geometry ----------------------------------------------------------------------------

def geom_check(alpha, count: int, seed: int = 1, cap: int = 50,
               search: str = "convergents", x_bits: int = 256) -> dict:
    """Compare geometric_tau with the dynamical tau on random points of Omega_alpha."""
    alpha = as_fraction(alpha)
    points = sample_omega_points(seed, count, alpha, x_bits=x_bits)
    agree = disagree = failures = 0
    tau_hist: dict[int, int] = {}
    examples = []
    for i, p in enumerate(points):
        try:
            dyn = tau(p, alpha, cap=cap)
            if not isinstance(dyn, Returned):
                failures += 1
                continue
            geo = geometric_tau(p, alpha, cap=cap, search=search)
        except RatlabError:
            failures += 1
            continue
        tau_hist[dyn.tau] = tau_hist.get(dyn.tau, 0) + 1
        if geo == dyn.tau:
            agree += 1
        else:
            disagree += 1
            if len(examples) < 5:
                examples.append({"index": i, "tau": dyn.tau, "geometric_tau": geo})
    return {
        "command": "geom-check", "alpha": float(alpha), "count": count, "seed": seed,
        "cap": cap, "search": search, "x_bits": x_bits, "agree": agree,
        "disagree": disagree, "certified_failures": failures,
        "failure_rate": failures / count,
        "tau_hist": {str(k): tau_hist[k] for k in sorted(tau_hist)},
        "disagreements": examples,
    }


def hurwitz_scan(alpha, n: int, bits: int = GOLDEN_BITS, tail_start: int | None = None,
                 tail_cap: int = 1000) -> dict:
    """Return indices of the golden-ratio orbit below alpha, plus a tail run.

    The tail run starts ``tau`` at ``T^m(x_0, y_0)`` for the last return ``m``
    and reports whether another return happens within ``tail_cap`` steps.
    """
    alpha = as_fraction(alpha)
    cf = cf_expand(golden_ratio(bits))
    hits = finite_return_scan(cf, INF, alpha, n)
    out = {"command": "hurwitz", "alpha": float(alpha), "alpha_exact": str(alpha),
           "n": n, "bits": bits, "certified_quotients": cf.length, "returns": hits}
    start = tail_start if tail_start is not None else (hits[-1] if hits else None)
    if start is not None and start + tail_cap + 2 <= cf.length:
        x_m, y_m = tail_and_reversal(cf, start)
        outcome = tau(NEPoint(x_m, y_m), alpha, cap=tail_cap)
        out["tail"] = {
            "start": start, "cap": tail_cap,
            "outcome": "NoReturnWithinCap" if isinstance(outcome, NoReturnWithinCap)
            else "Returned",
            "tau": outcome.tau if isinstance(outcome, Returned) else None,
        }
    return out
