# %% [markdown]
# # Maximum entropy with a mean-energy constraint
#
# Two solvers attack the same problem.  One finds the multipliers `(a, b)`
# by nested root finding and reads the occupations off the weight formula.
# The other runs a damped Newton iteration on the full optimality system.
# They should agree, and the result should pass the maximum certificate.

# %%
import numpy as np

from phistat import EntropyFamily, MaxEntProblem, solve_closed_form, solve_numeric, verify_maximum

energies = [0.0, 0.4, 1.1, 1.7, 2.5]
mean = 0.9

# %%
for family in (EntropyFamily.epsilon(-1), EntropyFamily.epsilon(0), EntropyFamily.epsilon(1), EntropyFamily.haldane(0.5)):
    prob = MaxEntProblem.from_energies(energies, mean, family)
    closed, numeric = solve_closed_form(prob), solve_numeric(prob)
    report = verify_maximum(closed, prob, raise_on_failure=False)
    print(family)
    print("  p      ", np.round(closed.p.p, 6))
    print(f"  a={closed.a:.6f} b={closed.b:.6f}  solver gap={np.max(np.abs(closed.p.p - numeric.p.p)):.2e}")
    print(f"  certificate passed: {report.passed} ({report.perturbation_trials} perturbations)")

# %% [markdown]
# Asking for a mean at the top of the spectrum has no interior solution.

# %%
from phistat import InfeasibleConstraint

try:
    MaxEntProblem.from_energies(energies, 2.5, EntropyFamily.epsilon(1))
except InfeasibleConstraint as exc:
    print("rejected:", exc)
