# %% [markdown]
# # First returns to the region below alpha
#
# For alpha >= 1/2 a point of the region returns in one or two steps,
# depending on which side of the curve y = alpha x / (alpha - x) it lies.
# Below 1/2 longer returns appear.

# %%
from collections import Counter
from fractions import Fraction

from ratlab.distributions import levy_limit
from ratlab.first_return import Returned, classify_region, tau
from ratlab.natext import mu_omega_alpha
from ratlab.orbit import sample_omega_points, scan_seed

for alpha in (Fraction(3, 4), Fraction(12, 25)):
    points = sample_omega_points(seed=3, count=2000, alpha=alpha)
    taus = Counter(tau(p, alpha).tau for p in points)
    print(f"alpha={float(alpha):g} return times {dict(sorted(taus.items()))}")

# %%
alpha = Fraction(3, 4)
by_region = Counter()
for p in sample_omega_points(seed=4, count=2000, alpha=alpha):
    out = tau(p, alpha)
    assert isinstance(out, Returned)
    by_region[(classify_region(p, alpha).value, out.tau)] += 1
print(dict(by_region))

# %% [markdown]
# Along one long orbit, the fraction of indices that land below alpha tends
# to the invariant mass of the region, and log(q)/k at the k-th return tends
# to the closed-form growth rate.

# %%
alphas = [Fraction(1), Fraction(1, 2), Fraction(3, 10)]
scan = scan_seed(seed=1, n_terms=40000, alphas=alphas)
k = 10000
for a in alphas:
    print(f"alpha={float(a):g}  k/n_k={scan.return_ratio(a, k):.5f} mu={mu_omega_alpha(a):.5f}"
          f"  rate={scan.levy_rate(a, k):.5f} limit={levy_limit(a):.5f}")
