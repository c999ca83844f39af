"""Deformed logarithms, interpolating quantum statistics and maximum-entropy
occupation weights.

Modules
-------
phi_calculus
    deformation functions and the deformed logarithm/exponential family
entropy
    closed-form and quadrature entropies with gradients and Hessians
simplex
    probability simplex, energy spectra and mean-energy constraints
maxent
    constrained entropy maximisation, two independent solvers
wu
    fractional exclusion statistics (Wu equation)
expfam
    occupation distributions as exponential families, seeded sampling
"""
from .config import DEFAULT_CONFIG, QuadratureConfig
from .entropy import (
    EntropyFamily,
    entropy_gradient,
    entropy_hessian,
    entropy_value,
    modified_phi_entropy,
    phi_entropy,
)
from .errors import *  # noqa: F401,F403
from .maxent import (
    MaxEntProblem,
    MaxEntSolution,
    solve_closed_form,
    solve_numeric,
    verify_maximum,
    weight_function,
)
from .phi_calculus import (
    PSI_INFINITY,
    EpsilonPhi,
    HaldanePhi,
    IdentityPhi,
    SeriesPhi,
    chi_eval,
    deduced_log,
    exp_phi,
    ln_phi,
    mod_exp_phi,
    mod_ln_phi,
    phi_eval,
    psi_eval,
)
from .simplex import EnergySpectrum, MomentConstraint, SimplexPoint, feasible_point, mean_energy, validate
from .wu import wu_omega, wu_stationarity_check, wu_weight

__version__ = "0.1.0"
