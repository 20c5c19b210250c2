# %% [markdown]
# # Return times from Ford circles
#
# The point (x, y) of the natural extension is the geodesic from y to x in
# the upper half plane. It lies below alpha exactly when that geodesic meets
# the horoball at infinity of height 1/(2 alpha); the return time is read off
# from the first Ford circle of the matching size that the geodesic crosses.

# %%
from fractions import Fraction

from ratlab.cf import cf_expand, golden_ratio
from ratlab.first_return import tau
from ratlab.hyperbolic import finite_return_scan, geometric_tau, minimal_disc
from ratlab.natext import INF
from ratlab.orbit import sample_omega_points

alpha = Fraction(12, 25)
for p in sample_omega_points(seed=5, count=8, alpha=alpha):
    disc = minimal_disc(p, alpha)
    print(f"x~{float(p.x.mid):.4f} y~{float(p.y):9.3f}  disc at {disc.tangent}"
          f"  geometric {geometric_tau(p, alpha)}  dynamic {tau(p, alpha).tau}")

# %% [markdown]
# The golden ratio has theta_n -> 1/sqrt(5) ~ 0.447, so below 0.44 it has
# only finitely many small coefficients, and below 0.48 every index counts.

# %%
cf = cf_expand(golden_ratio(3000))
print(finite_return_scan(cf, INF, Fraction(11, 25), 1000))
print(len(finite_return_scan(cf, INF, Fraction(12, 25), 1000)))
