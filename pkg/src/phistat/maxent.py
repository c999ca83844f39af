r"""Maximum-entropy occupation weights on a constrained simplex.

Maximising an entropy family on

.. math::

    \{p : p_i > 0,\ \textstyle\sum p_i = 1,\ \sum p_i E_i = E\}

gives the stationarity conditions :math:`\partial H/\partial p_i = a + bE_i`,
whose solutions are the weights :math:`p_i = w(a + bE_i)`, e.g.
:math:`1/(e^{a+bE_i}-\epsilon)` for the eps family.

Two independent routes are provided:

* :func:`solve_closed_form` finds the multipliers ``(a, b)`` for the known
  weights by nested one-dimensional root finds;
* :func:`solve_numeric` runs a damped Newton iteration on the full
  Lagrange system without using the weight formulas.

Strict concavity makes the maximiser unique, so the two must agree.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG
from .entropy import EntropyFamily, entropy_gradient, entropy_hessian, entropy_value
from .errors import ConvergenceError, DomainError, VerificationFailure
from .phi_calculus import _eps_denominator
from .roots import solve_monotone
from .simplex import MomentConstraint, SimplexPoint, boltzmann_beta, boltzmann_point
from .wu import wu_weights

__all__ = [
    "MaxEntProblem",
    "MaxEntSolution",
    "VerificationReport",
    "weight_function",
    "weights",
    "solve_closed_form",
    "solve_numeric",
    "verify_maximum",
]

STATIONARITY_TOL = 1e-8
CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class MaxEntProblem:
    constraint: MomentConstraint
    family: EntropyFamily

    def __post_init__(self):
        self.constraint.check_interior()

    @property
    def energies(self):
        return self.constraint.spectrum.E

    @classmethod
    def from_energies(cls, energies, mean_energy, family):
        return cls(MomentConstraint(energies, mean_energy), family)


@dataclass(frozen=True)
class MaxEntSolution:
    p: SimplexPoint
    a: float
    b: float
    entropy: float
    residual: float
    iterations: int

    def to_dict(self):
        return {
            "p": [float(x) for x in self.p.p],
            "a": float(self.a),
            "b": float(self.b),
            "entropy": float(self.entropy),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def _eta_floor(family):
    """Infimum of admissible natural arguments ``a + bE``."""
    if family.kind == "epsilon" and family.param > 0:
        return math.log(family.param)
    if family.kind == "haldane" and family.param == 0:
        return 0.0
    return -math.inf


def weights(family, eta, cfg=DEFAULT_CONFIG):
    """Occupation weights at natural arguments ``eta`` (array in, array out).

    The weight is the inverse of the entropy gradient, i.e. the solution of
    ``dH/dp = eta``.  For BGS this is ``exp(-1 - eta)``.
    """
    eta = np.asarray(eta, dtype=float)
    if family.kind == "bgs":
        return np.exp(-1.0 - eta)
    if family.kind == "haldane":
        return wu_weights(family.param, eta, cfg)
    eps = family.param
    denom = _eps_denominator(eta, eps)
    if not np.all(denom > 0):
        raise DomainError(f"exp(a + bE) must exceed eps={eps!r}")
    return 1.0 / denom


def weight_function(family, a, b, E, cfg=DEFAULT_CONFIG):
    """Occupation weight at energy ``E`` for multipliers ``(a, b)``."""
    return float(weights(family, a + b * float(E), cfg))


def _phi_of(family, p):
    # -1 / Hessian diagonal, without the domain checks of entropy_hessian
    if family.kind == "bgs":
        return p
    if family.kind == "epsilon":
        return p * (1.0 + family.param * p)
    g = family.param
    return p * (1.0 - g * p) * (1.0 + (1.0 - g) * p)


def _solve_a(family, E, b, cfg):
    """Normalisation multiplier at fixed ``b``; the weight sum falls with ``a``."""
    shift = -b * E
    floor = _eta_floor(family) + float(np.max(shift))

    # log of the weight sum is close to linear in a (exactly so at eps = 0)
    def f(a):
        return math.log(math.fsum(weights(family, a - shift, cfg)))

    def df(a):
        w = weights(family, a - shift, cfg)
        return -float(np.sum(_phi_of(family, w)) / np.sum(w))

    # the eps = 0 multiplier is a good starting point for every family
    a0 = float(np.logaddexp.reduce(shift))
    lo, hi = a0 - 1.0, a0 + 1.0
    if lo <= floor:
        lo = floor + 0.5 * (hi - floor) if hi > floor else floor + 1.0
        hi = max(hi, lo + 1.0)
    return solve_monotone(f, df, lo, hi, x0=a0, lower=floor, ftol=1e-16, maxiter=cfg.max_root_iters)


def solve_closed_form(prob, cfg=DEFAULT_CONFIG):
    """Multipliers ``(a, b)`` for the closed-form weights.

    ``a`` solves normalisation at fixed ``b`` (inner root find); ``b`` solves
    the mean-energy condition (outer root find).  The mean energy is strictly
    decreasing in ``b``: its derivative is minus a ``phi``-weighted variance
    of the energies, so the outer bracket always exists.
    """
    family = prob.family
    E = prob.energies
    target = prob.constraint.mean_energy
    spread = float(E[-1] - E[0])
    scale = max(1.0, float(np.max(np.abs(E))))
    calls = [0]
    cache = {}

    def state(b):
        if b not in cache:
            calls[0] += 1
            a = _solve_a(family, E, b, cfg)
            cache.clear()
            cache[b] = a, weights(family, a + b * E, cfg)
        return cache[b]

    def f(b):
        _, p = state(b)
        return math.fsum(p * E) - target

    def df(b):
        _, p = state(b)
        phi = _phi_of(family, p)
        s0, s1, s2 = phi.sum(), np.dot(phi, E), np.dot(phi, E * E)
        return -(s2 - s1 * s1 / s0)

    # start from the Boltzmann (eps = 0) inverse temperature
    b0 = boltzmann_beta(E, target)
    half = max(abs(b0), 1.0 / spread) * 0.25
    b = solve_monotone(f, df, b0 - half, b0 + half, x0=b0, ftol=1e-15 * scale, maxiter=cfg.max_root_iters)
    a, p = state(b)
    return _assemble(prob, p, a, b, calls[0])


def _residuals(prob, p, a, b):
    E = prob.energies
    grad = entropy_gradient(prob.family, p)
    stat = float(np.max(np.abs(grad - a - b * E)))
    norm = abs(math.fsum(p) - 1.0)
    mean = abs(math.fsum(p * E) - prob.constraint.mean_energy)
    return stat, norm, mean


def _assemble(prob, p, a, b, iterations):
    stat, norm, mean = _residuals(prob, p, a, b)
    scale = max(1.0, float(np.max(np.abs(prob.energies))))
    if norm > CONSTRAINT_TOL or mean > CONSTRAINT_TOL * scale or stat > STATIONARITY_TOL:
        raise ConvergenceError(
            f"solution residuals too large: stationarity={stat:.3g}, "
            f"normalisation={norm:.3g}, mean={mean:.3g}"
        )
    return MaxEntSolution(
        p=SimplexPoint(p),
        a=float(a),
        b=float(b),
        entropy=entropy_value(prob.family, p),
        residual=max(stat, norm, mean),
        iterations=iterations,
    )


def _in_domain(family, p):
    return bool(np.all(p > 0) and np.all(p < family.upper))


def solve_numeric(prob, cfg=DEFAULT_CONFIG, max_iter=100, max_halvings=60):
    """Damped Newton iteration on the Lagrange system.

    Unknowns are ``(p, a, b)``; equations are ``dH/dp_i - a - b E_i = 0``
    together with the two linear constraints.  The Hessian block is diagonal,
    so each step reduces to a 2x2 solve for the multiplier increments.
    Steps are halved until the iterate stays in the entropy domain and the
    residual norm decreases.
    """
    family = prob.family
    E = prob.energies
    target = prob.constraint.mean_energy
    p = boltzmann_point(E, boltzmann_beta(E, target))
    # least-squares multipliers for the starting point
    A = np.column_stack([np.ones_like(E), E])
    a, b = np.linalg.lstsq(A, entropy_gradient(family, p), rcond=None)[0]

    def residual(p, a, b):
        r = entropy_gradient(family, p) - a - b * E
        return r, math.fsum(p) - 1.0, math.fsum(p * E) - target

    def norm(r, c1, c2):
        return max(float(np.max(np.abs(r))), abs(c1), abs(c2))

    r, c1, c2 = residual(p, a, b)
    current = norm(r, c1, c2)
    floor = 1e-13 * max(1.0, float(np.max(np.abs(E))))
    for it in range(1, max_iter + 1):
        u = 1.0 / entropy_hessian(family, p)
        # h_i dp_i - da - E_i db = -r_i  =>  dp_i = u_i (da + E_i db - r_i)
        M = np.array([[u.sum(), np.dot(u, E)], [np.dot(u, E), np.dot(u, E * E)]])
        rhs = np.array([np.dot(u, r) - c1, np.dot(u * E, r) - c2])
        da, db = np.linalg.solve(M, rhs)
        dp = u * (da + E * db - r)
        t = 1.0
        for _ in range(max_halvings):
            p_new = p + t * dp
            if _in_domain(family, p_new):
                r_new, c1_new, c2_new = residual(p_new, a + t * da, b + t * db)
                trial = norm(r_new, c1_new, c2_new)
                if trial < current or trial <= floor:
                    break
            t *= 0.5
        else:
            if current <= STATIONARITY_TOL * 1e-2:
                break
            raise ConvergenceError(f"line search failed at iteration {it} (residual {current:.3g})")
        p, a, b = p_new, a + t * da, b + t * db
        r, c1, c2 = r_new, c1_new, c2_new
        current = trial
        if current <= floor:
            break
    else:
        raise ConvergenceError(f"Newton iteration did not converge in {max_iter} steps")
    return _assemble(prob, p, a, b, it)


@dataclass
class VerificationReport:
    stationarity_residual: float
    hessian_diagonal: np.ndarray
    hessian_negative: bool
    perturbation_trials: int
    perturbation_violations: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    def to_dict(self):
        return {
            "stationarity_residual": self.stationarity_residual,
            "hessian_diagonal": [float(x) for x in self.hessian_diagonal],
            "hessian_negative": self.hessian_negative,
            "perturbation_trials": self.perturbation_trials,
            "perturbation_violations": self.perturbation_violations,
            "passed": self.passed,
        }


def tangent_directions(E, count, rng):
    """Random unit vectors orthogonal to ``1`` and ``E``.

    The tangent space of the constrained simplex has dimension ``n - 2``; for
    two levels it is trivial and an empty array is returned.
    """
    n = len(E)
    if n <= 2:
        return np.empty((0, n))
    A = np.vstack([np.ones(n), E])
    # orthonormal basis of the null space of A
    _, _, vt = np.linalg.svd(A)
    basis = vt[2:]
    coeffs = rng.standard_normal((count, n - 2))
    d = coeffs @ basis
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def verify_maximum(sol, prob, n_directions=100, steps=(1e-3, 1e-2), seed=0, raise_on_failure=True):
    """Certify that ``sol`` is a strict constrained maximum.

    Checks, in order: stationarity residual at most 1e-8, strictly negative
    Hessian diagonal, and strict entropy decrease along ``n_directions``
    random tangent directions for every step size.  Steps that would leave the
    entropy domain are halved until they fit.
    """
    family = prob.family
    E = prob.energies
    p = np.asarray(sol.p.p)
    stat, _, _ = _residuals(prob, p, sol.a, sol.b)
    hess = entropy_hessian(family, p)
    negative = bool(np.all(hess < 0))

    rng = np.random.default_rng(seed)
    h0 = entropy_value(family, p)
    trials = violations = 0
    first_bad = None
    for d in tangent_directions(E, n_directions, rng):
        for step in steps:
            t = step
            while not _in_domain(family, p + t * d):
                t *= 0.5
            trials += 1
            h1 = entropy_value(family, p + t * d)
            if not h1 < h0:
                violations += 1
                if first_bad is None:
                    first_bad = f"entropy {h1!r} >= {h0!r} at step {t!r}"

    report = VerificationReport(stat, hess, negative, trials, violations)
    report.checks = [
        ("stationarity", stat <= STATIONARITY_TOL, f"residual {stat:.3g}"),
        ("hessian", negative, f"max diagonal {float(np.max(hess)):.3g}"),
        ("perturbation", violations == 0, first_bad or f"{trials} trials"),
    ]
    if raise_on_failure:
        for name, ok, detail in report.checks:
            if not ok:
                raise VerificationFailure(name, detail)
    return report
