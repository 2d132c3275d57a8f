# -*- coding: utf-8 -*-
"""
Retracting an AL pair onto a standard pair
==========================================

Every AL pair is determined by the defining pair of the weak stable and unstable bundles and by two functions
`(sigma_s, sigma_u)`. Scaling both by `1 - t` retracts the pair onto the standard pair of its defining pair, and the
AL margin does not decrease along the way.
"""

# %%
# Start from the counterexample pair with `A = 1`: it is AL but not linear AL.

import matplotlib.pyplot as plt

from anosov_liouville.constructions import counterexample_pair, extract_sigma, model_defining_pair, retraction_path
from anosov_liouville.criteria import classify_pair, pair_invariants
from anosov_liouville.frames import CATMAP_KAPPA, make_sol_suspension

model = make_sol_suspension(CATMAP_KAPPA, grid_t=64)
dp = model_defining_pair(model)
pair = counterexample_pair(1.0, dp)

sig = extract_sigma(pair, dp)
print("sigma_s =", sig.sigma_s.min(), " sigma_u =", sig.sigma_u.min())

# %%
# Follow the AL and linear AL margins along the retraction.

path = retraction_path(pair, dp, n_samples=33)
t = [t for t, _ in path]
reports = [classify_pair(pair_invariants(p)) for _, p in path]

fig, ax = plt.subplots()
ax.plot(t, [r["AL"].value for r in reports], label="AL margin")
ax.plot(t, [r["lin_AL"].value for r in reports], label="linear AL margin")
ax.axhline(0, color="k", lw=0.5)
ax.set_xlabel("t")
ax.legend()
plt.show()
