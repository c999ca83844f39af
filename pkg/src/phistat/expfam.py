r"""Occupation-number distributions as one-parameter exponential families.

Each family has log-mass :math:`x\,\eta(p) + \text{const}(p)` in the outcome
``x`` so that inverting the natural parameter :math:`\eta(p)` gives a
quantum-statistical weight function:

====================  ============================  ===========================
family                natural parameter             inverse
====================  ============================  ===========================
``Categorical``       :math:`\eta_i = \ln p_i`      :math:`e^{\eta_i}`
``Bernoulli``         :math:`\ln\frac{p}{1-p}`      :math:`1/(e^{-\eta}+1)`
``Geometric``         :math:`\ln\frac{p}{p+1}`      :math:`1/(e^{-\eta}-1)`
``CurvedBernoulli``   :math:`\ln\frac{p}{1+\epsilon p}`  :math:`1/(e^{-\eta}-\epsilon)`, :math:`\epsilon<0`
``CurvedGeometric``   :math:`\ln\frac{p}{1+\epsilon p}`  :math:`1/(e^{-\eta}-\epsilon)`, :math:`\epsilon>0`
====================  ============================  ===========================

With :math:`\eta = -(a + bE)` the inverses are the Boltzmann, Fermi-Dirac,
Bose-Einstein and intermediate weights.  Note the sign: the entropy and
maximum-entropy modules use :math:`+(a + bE)` as their natural argument.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, UnsupportedOutcome
from .phi_calculus import _eps_denominator
from .simplex import EnergySpectrum, SimplexPoint, validate

__all__ = [
    "OccupationModel",
    "Categorical",
    "Bernoulli",
    "Geometric",
    "CurvedBernoulli",
    "CurvedGeometric",
    "SampleStats",
    "log_mass",
    "natural_parameter",
    "natural_parameter_inverse",
    "exact_mean",
    "exact_variance",
    "normalization_check",
    "sample",
]

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class SampleStats:
    count: int
    mean: float
    variance: float
    seed: int

    def to_dict(self):
        return {"count": self.count, "mean": self.mean, "variance": self.variance, "seed": self.seed}


def _rng(seed):
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.default_rng(seed)


def _stats(draws, seed):
    draws = np.asarray(draws, dtype=float)
    return SampleStats(
        count=len(draws),
        mean=float(np.mean(draws)),
        variance=float(np.var(draws)),
        seed=int(seed),
    )


class OccupationModel:
    """Common interface; concrete models are the five families below."""

    tag = None

    def log_mass(self, x):
        raise NotImplementedError

    def natural_parameter(self):
        raise NotImplementedError

    def exact_mean(self):
        raise NotImplementedError

    def exact_variance(self):
        raise NotImplementedError

    def normalization_check(self, tail_tol=1e-17):
        raise NotImplementedError

    def sample(self, n, seed):
        raise NotImplementedError


class _TwoPoint(OccupationModel):
    """Distributions on {0, 1} described by ``P(X=1)``."""

    def _p1(self):
        raise NotImplementedError

    def _log_p1(self):
        return math.log(self._p1())

    def _log_p0(self):
        return math.log1p(-self._p1())

    def log_mass(self, x):
        if x == 1:
            return self._log_p1()
        if x == 0:
            return self._log_p0()
        raise UnsupportedOutcome(f"{x!r} is not in the support {{0, 1}}")

    def exact_mean(self):
        return self._p1()

    def exact_variance(self):
        q = self._p1()
        return q * (1.0 - q)

    def normalization_check(self, tail_tol=1e-17):
        return abs(math.fsum([math.exp(self._log_p0()), math.exp(self._log_p1())]) - 1.0)

    def sample(self, n, seed):
        if n < 1:
            raise ValueError("n must be at least 1")
        u = _rng(seed).random(int(n))
        return _stats(u < self._p1(), seed)


class _GeometricType(OccupationModel):
    """Distributions on {0, 1, 2, ...} with ``P(X=n) = (1 - r) r^n``."""

    def _log_ratio(self):
        raise NotImplementedError

    def _log_p0(self):
        raise NotImplementedError

    def log_mass(self, x):
        if isinstance(x, bool) or not float(x).is_integer() or x < 0:
            raise UnsupportedOutcome(f"{x!r} is not a nonnegative integer")
        return x * self._log_ratio() + self._log_p0()

    def exact_mean(self):
        r = math.exp(self._log_ratio())
        return r / (1.0 - r)

    def exact_variance(self):
        m = self.exact_mean()
        return m * (1.0 + m)

    def truncation_index(self, tail_tol):
        """Smallest ``N`` with ``P(X > N) = r^(N+1) < tail_tol``."""
        return max(0, math.ceil(math.log(tail_tol) / self._log_ratio()) - 1)

    def normalization_check(self, tail_tol=1e-17):
        """``|sum_{n<=N} P(X=n) + r^(N+1) - 1|`` with the tail in closed form."""
        N = self.truncation_index(tail_tol)
        n = np.arange(N + 1)
        masses = np.exp(n * self._log_ratio() + self._log_p0())
        tail = math.exp((N + 1) * self._log_ratio())
        return abs(math.fsum(masses) + tail - 1.0)

    def sample(self, n, seed):
        if n < 1:
            raise ValueError("n must be at least 1")
        u = _rng(seed).random(int(n))
        # inverse transform: P(X >= k) = r^k, with 1 - u in (0, 1]
        draws = np.floor(np.log1p(-u) / self._log_ratio())
        return _stats(draws, seed)


@dataclass(frozen=True)
class Categorical(OccupationModel):
    """Finite distribution over the levels of an energy spectrum."""

    p: SimplexPoint
    levels: EnergySpectrum
    tag = "categorical"

    def __post_init__(self):
        if not isinstance(self.p, SimplexPoint):
            object.__setattr__(self, "p", validate(self.p))
        if not isinstance(self.levels, EnergySpectrum):
            object.__setattr__(self, "levels", EnergySpectrum(self.levels))
        if len(self.p) != len(self.levels):
            raise DomainError("one probability per level is required")

    def _index(self, x):
        idx = np.flatnonzero(self.levels.E == x)
        if len(idx) != 1:
            raise UnsupportedOutcome(f"{x!r} is not one of the levels")
        return int(idx[0])

    def log_mass(self, x):
        return math.log(self.p.p[self._index(x)])

    def natural_parameter(self):
        return np.log(self.p.p)

    def exact_mean(self):
        return math.fsum(self.p.p * self.levels.E)

    def exact_variance(self):
        m = self.exact_mean()
        return math.fsum(self.p.p * (self.levels.E - m) ** 2)

    def normalization_check(self, tail_tol=1e-17):
        return abs(math.fsum(np.exp(self.natural_parameter())) - 1.0)

    def sample(self, n, seed):
        if n < 1:
            raise ValueError("n must be at least 1")
        cdf = np.cumsum(self.p.p)
        u = _rng(seed).random(int(n)) * cdf[-1]
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
        return _stats(self.levels.E[idx], seed)


@dataclass(frozen=True)
class Bernoulli(_TwoPoint):
    p: float
    tag = "bernoulli"

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"Bernoulli p must lie in (0, 1), got {self.p!r}")

    def _p1(self):
        return self.p

    def _log_p0(self):
        return math.log1p(-self.p)

    def natural_parameter(self):
        return math.log(self.p) - math.log1p(-self.p)


@dataclass(frozen=True)
class Geometric(_GeometricType):
    """``P(X=n) = p^n / (p+1)^(n+1)``; ``p`` is the mean occupation."""

    p: float
    tag = "geometric"

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"geometric p must be positive, got {self.p!r}")

    def _log_ratio(self):
        return -math.log1p(1.0 / self.p)

    def _log_p0(self):
        return -math.log1p(self.p)

    def natural_parameter(self):
        return self._log_ratio()


@dataclass(frozen=True)
class CurvedBernoulli(_TwoPoint):
    """Two-point law with ``P(X=1) = p / (1 + (1+eps) p)`` for ``eps`` in [-1, 0)."""

    p: float
    eps: float
    tag = "curved_bernoulli"

    def __post_init__(self):
        if not -1.0 <= self.eps < 0.0:
            raise DomainError(f"curved Bernoulli needs eps in [-1, 0), got {self.eps!r}")
        if not self.p > 0 or not 1.0 + self.eps * self.p > 0:
            raise DomainError(f"curved Bernoulli needs 0 < p < -1/eps, got p={self.p!r}")

    def _p1(self):
        return self.p / (1.0 + (1.0 + self.eps) * self.p)

    def _log_p1(self):
        return math.log(self.p) - math.log1p((1.0 + self.eps) * self.p)

    def _log_p0(self):
        return math.log1p(self.eps * self.p) - math.log1p((1.0 + self.eps) * self.p)

    def natural_parameter(self):
        return math.log(self.p) - math.log1p(self.eps * self.p)


@dataclass(frozen=True)
class CurvedGeometric(_GeometricType):
    """Geometric law with ratio ``p / (1 + eps p)`` for ``eps`` in (0, 1]."""

    p: float
    eps: float
    tag = "curved_geometric"

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise DomainError(f"curved geometric needs eps in (0, 1], got {self.eps!r}")
        if not self.p > 0 or not 1.0 + (self.eps - 1.0) * self.p > 0:
            raise DomainError(f"curved geometric needs 0 < p and 1 + (eps-1) p > 0, got p={self.p!r}")

    def _log_ratio(self):
        # ln(p / (1 + eps p)) written to stay accurate for large p
        return -math.log1p((self.eps - 1.0) + 1.0 / self.p)

    def _log_p0(self):
        return math.log1p((self.eps - 1.0) * self.p) - math.log1p(self.eps * self.p)

    def exact_mean(self):
        return self.p / (1.0 + (self.eps - 1.0) * self.p)

    def natural_parameter(self):
        return self._log_ratio()


_TAGS = ("categorical", "bernoulli", "geometric", "curved_bernoulli", "curved_geometric")


def natural_parameter_inverse(family, eta, eps=None):
    """Parameter ``p`` whose natural parameter is ``eta``.

    ``family`` is one of ``"categorical"`` (``eta`` may be an array),
    ``"bernoulli"``, ``"geometric"``, ``"curved_bernoulli"`` or
    ``"curved_geometric"``; the curved families need ``eps``.
    """
    if family not in _TAGS:
        raise ValueError(f"unknown family {family!r}; expected one of {_TAGS}")
    if family == "categorical":
        return np.exp(np.asarray(eta, dtype=float))
    eta = float(eta)
    if family == "bernoulli":
        eps = -1.0
    elif family == "geometric":
        eps = 1.0
    elif eps is None:
        raise ValueError(f"{family} needs eps")
    denom = float(_eps_denominator(-eta, eps))
    if not denom > 0:
        raise RangeError(f"exp(-eta) - eps = {denom!r} is not positive")
    return 1.0 / denom


def log_mass(model, x):
    return model.log_mass(x)


def natural_parameter(model):
    return model.natural_parameter()


def exact_mean(model):
    return model.exact_mean()


def exact_variance(model):
    return model.exact_variance()


def normalization_check(model, tail_tol=1e-17):
    return model.normalization_check(tail_tol)


def sample(model, n, seed):
    """Seeded Monte-Carlo summary; the generator is local to the call."""
    return model.sample(n, seed)
