# %% [markdown]
# # Approximation coefficients of a random irrational
#
# A random x in (0, 1) is held as a dyadic interval. Its partial quotients,
# convergents and the coefficients theta_n = q_n |q_n x - p_n| are certified
# for every point of that interval.

# %%
from fractions import Fraction

import numpy as np

from ratlab.cf import cf_expand, sample_irrational, tail_and_reversal, theta_seq
from ratlab.first_return import theta_bar
from ratlab.natext import NEPoint, norm

x = sample_irrational(seed=7, bits=512)
cf = cf_expand(x)
print(x, "certifies", cf.length, "quotients")
print("a_1..a_12 =", cf.quotients[:12])

# %% [markdown]
# theta_n read two ways: directly from the convergent, and as 1/(x_n - y_n)
# at the n-th point of the natural-extension orbit. The intervals coincide.

# %%
thetas = theta_seq(cf, 20)
for n in range(0, 21, 5):
    x_n, y_n = tail_and_reversal(cf, n)
    via_orbit = norm(NEPoint(x_n, y_n, boundary=(y_n == -1)))
    print(n, float(thetas[n].mid), float(via_orbit.mid), f"{float(thetas[n].width):.2e}")

# %% [markdown]
# Keep only the terms below alpha. Each kept index is also reached by the
# first-return map to the region {1/(x - y) < alpha}.

# %%
alpha = Fraction(1, 2)
seq = theta_bar(cf, alpha, 30)
print("indices n_k:", seq.indices)
values = np.array([float(e.theta_bar.mid) for e in seq.entries])
print("all below alpha:", bool((values < alpha).all()), " mean", values.mean())
