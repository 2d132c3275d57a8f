# -*- coding: utf-8 -*-
"""
Losing the AL property under a conformal perturbation
=====================================================

The conformal action `(e^sigma alpha_-, e^sigma alpha_+)` does not change the contact structures, but it changes
`f_0` by `2 k X.sigma`. On the standard pair of the cat-map suspension, `k = 2` and the pair stays AL as long as
`sup |4 X.sigma| < 4 kappa`. For `sigma(t) = eps sin(2 pi t)` the threshold is `eps = kappa / (2 pi)`.
"""

# %%
# Build the model and its standard pair.

import matplotlib.pyplot as plt
import numpy as np

from anosov_liouville.constructions import conformal_action, conformal_threshold, model_defining_pair, standard_pair
from anosov_liouville.criteria import classify_pair, pair_invariants
from anosov_liouville.frames import CATMAP_KAPPA, make_sol_suspension

model = make_sol_suspension(CATMAP_KAPPA, grid_t=128)
pair = standard_pair(model_defining_pair(model))

# %%
# Sweep the amplitude and record the AL margin.

eps_values = np.linspace(0.0, 0.3, 61)
margins = []
for eps in eps_values:
    sigma = model.field(lambda t: eps * np.sin(2 * np.pi * t))
    inv = pair_invariants(conformal_action(sigma, pair))
    margins.append(classify_pair(inv)["AL"].value)

# %%
# Locate the crossing with a bracketing root finder and compare it with the closed form.

threshold = conformal_threshold(pair, model.field(lambda t: np.sin(2 * np.pi * t)), upper=0.3)
print(f"threshold {threshold:.8f}, kappa / (2 pi) = {CATMAP_KAPPA / (2 * np.pi):.8f}")

fig, ax = plt.subplots()
ax.plot(eps_values, margins, label="AL margin")
ax.axhline(0, color="k", lw=0.5)
ax.axvline(threshold, color="r", ls="--", label="threshold")
ax.set_xlabel("eps")
ax.set_ylabel("min (2 sqrt(f_- f_+) - |f_0|)")
ax.legend()
plt.show()
