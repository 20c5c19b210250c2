# %% [markdown]
# # Consecutive pairs of small coefficients
#
# Pairs (theta_bar_k, theta_bar_{k+1}) of one number fill the triangle-like
# region {w, z < alpha, w + z < 1}. This regenerates the three scatter clouds
# for x = frac(pi^2 + sqrt(2) - 1) and compares the alpha = 1 cloud with the
# limiting pair density.

# %%
from fractions import Fraction
from pathlib import Path

from ratlab.cf import fig1_constant
from ratlab.distributions import DensityModel, empirical_compare, select_pair_variant
from ratlab.experiments import pair_rows
from ratlab.svg import write_scatter

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)
rows = pair_rows(fig1_constant(), [1, 0.7, 0.5], count=20000)
for alpha, table in rows.items():
    path = out_dir / f"pairs_a{float(alpha):g}.svg"
    write_scatter(str(path), table[:, 1:], float(alpha), title=f"alpha = {float(alpha):g}")
    print("wrote", path)

# %%
cloud = rows[Fraction(1)][:, 1:]
report = empirical_compare(cloud, DensityModel.pair_jager(1), 6, alpha=1.0)
print(f"alpha=1: L1 on a 6x6 grid = {report.l1:.4f}")

# %% [markdown]
# For alpha < 1 two readings of the density differ only in the radicand.
# Pushing the invariant measure forward through the inverse branches
# decides between them.

# %%
choice = select_pair_variant(0.7, grid=20)
print(choice["l1"], "accepted:", choice["accepted"])
