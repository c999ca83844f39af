# %% [markdown]
# # Occupation weights across the epsilon family
#
# The weight `1/(exp(a + bE) - eps)` moves from Fermi-Dirac (eps = -1)
# through Boltzmann (eps = 0) to Bose-Einstein (eps = 1).  Here we tabulate
# it on a small energy grid and check that it is also the modified deformed
# exponential of the same argument.

# %%
import numpy as np

from phistat import EntropyFamily, EpsilonPhi, mod_exp_phi, weight_function

energies = np.linspace(0.0, 3.0, 7)
a, b = 0.5, 1.0

# %%
print("E     " + "  ".join(f"eps={e:+.1f}" for e in (-1, -0.5, 0, 0.5, 1)))
for E in energies:
    row = [weight_function(EntropyFamily.epsilon(e), a, b, E) for e in (-1, -0.5, 0, 0.5, 1)]
    print(f"{E:4.1f}  " + "  ".join(f"{w:8.5f}" for w in row))

# %% [markdown]
# The same numbers come out of the modified exponential of the
# deformation `u(1 + eps u)`.

# %%
gap = max(
    abs(mod_exp_phi(EpsilonPhi(e), a + b * E) - weight_function(EntropyFamily.epsilon(e), a, b, E))
    for e in (-1, -0.5, 0, 0.5, 1)
    for E in energies
)
print("largest difference:", gap)
