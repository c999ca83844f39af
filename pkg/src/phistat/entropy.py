r"""Entropy functionals and their derivatives.

Closed-form families (sums over levels :math:`p_i`):

* ``EntropyFamily.bgs()``: :math:`-\sum p\ln p`
* ``EntropyFamily.epsilon(eps)``:
  :math:`\sum \epsilon^{-1}(1+\epsilon p)\ln(1+\epsilon p) - p\ln p`;
  ``eps = 1`` is the Bose-Einstein entropy, ``eps = -1`` the Fermi-Dirac one
* ``EntropyFamily.haldane(g)``:
  :math:`\sum (1+(1-g)p)\ln(1+(1-g)p) - (1-gp)\ln(1-gp) - p\ln p`

Every family has a diagonal Hessian :math:`-1/\phi(p_i)` for the matching
deformation :math:`\phi`, which is what makes the maximum-entropy problem
strictly concave.

:func:`phi_entropy` and :func:`modified_phi_entropy` evaluate the
quadrature-defined entropies of a deformation function; they exist to check
the closed forms, not for speed.
"""
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import DivergentIntegral, DomainError
from .phi_calculus import EpsilonPhi, HaldanePhi, IdentityPhi, _moment, _quad

__all__ = [
    "EntropyFamily",
    "entropy_value",
    "entropy_gradient",
    "entropy_hessian",
    "phi_entropy",
    "modified_phi_entropy",
]

# below this |eps| the eps-family uses its second-order expansion
_EPS_SERIES = 1e-8


@dataclass(frozen=True)
class EntropyFamily:
    """One of ``"bgs"``, ``"epsilon"`` (param eps) or ``"haldane"`` (param g)."""

    kind: str
    param: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "param", float(self.param))
        if self.kind == "epsilon":
            if not -1.0 <= self.param <= 1.0:
                raise DomainError(f"eps must lie in [-1, 1], got {self.param!r}")
        elif self.kind == "haldane":
            if not 0.0 <= self.param <= 1.0:
                raise DomainError(f"g must lie in [0, 1], got {self.param!r}")
        elif self.kind == "bgs":
            object.__setattr__(self, "param", 0.0)
        else:
            raise ValueError(f"unknown entropy family {self.kind!r}")

    @classmethod
    def bgs(cls):
        return cls("bgs")

    @classmethod
    def epsilon(cls, eps):
        return cls("epsilon", eps)

    @classmethod
    def haldane(cls, g):
        return cls("haldane", g)

    @property
    def phi(self):
        """Deformation function whose ``-1/phi`` is the Hessian diagonal."""
        if self.kind == "epsilon":
            return EpsilonPhi(self.param)
        if self.kind == "haldane":
            return HaldanePhi(self.param)
        return IdentityPhi()

    @property
    def upper(self):
        """Supremum of admissible occupations."""
        return self.phi.upper

    def __str__(self):
        if self.kind == "bgs":
            return "bgs"
        name = "eps" if self.kind == "epsilon" else "g"
        return f"{self.kind}({name}={self.param!r})"


def _occupations(f, p):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise DomainError("expected a non-empty 1-d occupation sequence")
    if not np.all(p > 0):
        raise DomainError("occupations must be strictly positive")
    if not np.all(p < f.upper):
        raise DomainError(f"occupations must stay below {f.upper!r} for {f}")
    return p


def entropy_value(f, p):
    """Entropy of the occupation sequence ``p`` under family ``f``.

    At ``eps = 0`` the removable singularity is replaced by its limit
    ``sum(p) - sum(p ln p)``, which is ``H_BGS + 1`` on the simplex.
    """
    p = _occupations(f, p)
    plogp = p * np.log(p)
    if f.kind == "bgs":
        return -math.fsum(plogp)
    if f.kind == "epsilon":
        eps = f.param
        if abs(eps) < _EPS_SERIES:
            terms = p + 0.5 * eps * p * p - plogp
        else:
            x = eps * p
            terms = (1.0 + x) * np.log1p(x) / eps - plogp
        return math.fsum(terms)
    g = f.param
    c = 1.0 - g
    terms = (1.0 + c * p) * np.log1p(c * p) - (1.0 - g * p) * np.log1p(-g * p) - plogp
    return math.fsum(terms)


def entropy_gradient(f, p):
    """Componentwise partial derivatives of :func:`entropy_value`.

    For the eps and Haldane families these are the modified logarithms
    ``ln((1 + eps p)/p)`` and ``ln((1+(1-g)p)^(1-g) (1-gp)^g / p)``.
    """
    p = _occupations(f, p)
    logp = np.log(p)
    if f.kind == "bgs":
        return -logp - 1.0
    if f.kind == "epsilon":
        return np.log1p(f.param * p) - logp
    g = f.param
    c = 1.0 - g
    return c * np.log1p(c * p) + g * np.log1p(-g * p) - logp


def entropy_hessian(f, p):
    """Diagonal of the Hessian, ``-1/phi(p_i)``; off-diagonal entries vanish."""
    p = _occupations(f, p)
    if f.kind == "bgs":
        return -1.0 / p
    if f.kind == "epsilon":
        return -1.0 / (p * (1.0 + f.param * p))
    g = f.param
    return -1.0 / (p * (1.0 - g * p) * (1.0 + (1.0 - g) * p))


def _probabilities(phi, p):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0 or not np.all(p > 0):
        raise DomainError("expected a non-empty sequence of positive probabilities")
    if not np.all(p < phi.upper):
        raise DomainError(f"probabilities must stay below {phi.upper!r} for {phi!r}")
    return p


def phi_entropy(phi, p, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Deformed entropy :math:`\sum_i p_i \int_{p_i}^1 v^{-2}\int_0^v \frac{u\,du}{\phi(u)}\,dv`.

    Equals :math:`\sum_i p_i\ln_\chi(1/p_i)`; for ``IdentityPhi`` it is the
    Shannon entropy.  ``method="quad"`` evaluates the inner integral by
    quadrature as well.
    """
    p = _probabilities(phi, p)
    if phi.upper < 1.0:
        raise DomainError(f"{phi!r} is not defined up to 1")
    total = []
    for pi in p:
        if pi == 1.0:
            total.append(0.0)
            continue
        outer = _quad(lambda v: _moment(phi, v, cfg, method) / (v * v), pi, 1.0, cfg)
        total.append(pi * outer)
    return math.fsum(total)


def modified_phi_entropy(phi, p, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Modified deformed entropy
    :math:`\sum_i p_i \int_{p_i}^\infty v^{-2}\int_0^v \frac{u\,du}{\phi(u)}\,dv`.

    The outer integral converges only when phi is defined on all of
    :math:`(0,\infty)` and grows faster than linearly; otherwise
    :class:`DivergentIntegral` is raised.  For ``EpsilonPhi(eps)`` with
    ``eps > 0`` the result is ``H_eps + ln(1/eps) * sum(p)``.
    """
    p = _probabilities(phi, p)
    if math.isfinite(phi.upper):
        raise DivergentIntegral(f"{phi!r} vanishes at {phi.upper!r}; the tail integral is undefined")
    if phi.degree < 2:
        raise DivergentIntegral(f"tail integrand of {phi!r} decays like 1/v; the integral diverges")
    total = []
    for pi in p:
        # w = 1/v turns the tail over [p_i, inf) into the finite interval (0, 1/p_i]
        outer = _quad(lambda w: _moment(phi, 1.0 / w, cfg, method), 0.0, 1.0 / pi, cfg)
        total.append(pi * outer)
    return math.fsum(total)
