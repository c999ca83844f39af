# %% [markdown]
# # Fractional exclusion: from bosons to fermions
#
# For exclusion parameter `g` the occupation is `1/(omega + g)` where
# `omega` solves `omega**g * (1 + omega)**(1 - g) = exp(eta)`.  At `g = 0`
# and `g = 1` we recover the Bose and Fermi weights.

# %%
import math

import numpy as np

from phistat import EntropyFamily, entropy_gradient, wu_weight

etas = np.linspace(0.25, 3.0, 12)

# %%
for g in (0.0, 0.25, 0.5, 0.75, 1.0):
    p = [wu_weight(g, eta) for eta in etas]
    print(f"g={g:.2f} " + " ".join(f"{x:7.4f}" for x in p))

print("Bose   " + " ".join(f"{1 / math.expm1(eta):7.4f}" for eta in etas))
print("Fermi  " + " ".join(f"{1 / (math.exp(eta) + 1):7.4f}" for eta in etas))

# %% [markdown]
# The weight is the stationary point of the Haldane entropy: its gradient
# there returns `eta`.

# %%
for g in (0.25, 0.5, 0.75):
    worst = max(abs(entropy_gradient(EntropyFamily.haldane(g), [wu_weight(g, eta)])[0] - eta) for eta in etas)
    print(f"g={g}: max |gradient - eta| = {worst:.2e}")
