r"""Deformed logarithms and exponentials built from a deformation function.

A deformation function :math:`\phi` is strictly positive on an interval
:math:`(0, u_{max})` and behaves like :math:`u` near the origin.  From it one
builds

.. math::

    \ln_\phi(u) = \int_1^u \frac{dv}{\phi(v)}, \qquad
    \chi(u) = \Big[\int_0^{1/u} \frac{v\,dv}{\phi(v)}\Big]^{-1},

the inverse :math:`\exp_\phi`, the rate function :math:`\psi = \phi\circ\exp_\phi`,
the deduced logarithm :math:`\omega_\phi = \ln_\chi`, and the "modified"
logarithm :math:`\widetilde{\ln}_\phi` normalised at infinity whose inverse
gives the occupation weights of interpolating quantum statistics.

Four deformation families are available:

============================  ==========================================
``IdentityPhi()``              :math:`u`
``EpsilonPhi(eps)``            :math:`u(1+\epsilon u)`, :math:`\epsilon\in[-1,1]`
``HaldanePhi(g)``              :math:`u(1-gu)(1+(1-g)u)`, :math:`g\in[0,1]`
``SeriesPhi(T)``               :math:`u - \sum_{n\ge2} T_{n-1}u^n`
============================  ==========================================

Closed forms are used wherever they exist; ``method="quad"`` forces the
quadrature route so that both can be compared.
"""
import functools
import math
import sys
import warnings

import numpy as np
from scipy import integrate

from .config import DEFAULT_CONFIG
from .errors import ConvergenceError, DomainError, QuadratureError, RangeError
from .roots import expand_bracket, newton_bisect

__all__ = [
    "PhiFunction",
    "IdentityPhi",
    "EpsilonPhi",
    "HaldanePhi",
    "SeriesPhi",
    "PSI_INFINITY",
    "phi_eval",
    "ln_phi",
    "ln_phi_range",
    "exp_phi",
    "psi_eval",
    "chi_eval",
    "chi_log",
    "deduced_log",
    "mod_ln_phi",
    "mod_exp_phi",
]

#: Value returned by :func:`psi_eval` above the range of :math:`\ln_\phi`.
PSI_INFINITY = math.inf

_SERIES_MARGIN = 1e-12
_LOG_TINY = math.log(sys.float_info.min)
_LOG_HUGE = math.log(sys.float_info.max) - 1.0


class PhiFunction:
    """Base class of the deformation families.

    Subclasses provide :meth:`ratio` (``phi(u) / u``) and the validity bound
    :attr:`upper`; closed-form hooks return ``None`` when unavailable.
    """

    #: supremum of the validity interval ``(0, upper)``
    upper = math.inf

    def ratio(self, u):
        raise NotImplementedError

    def __call__(self, u):
        return phi_eval(self, u)

    @property
    def degree(self):
        """Polynomial degree of phi (decides convergence of tail integrals)."""
        raise NotImplementedError

    def contains(self, u):
        return 0.0 < u < self.upper

    def tail_density(self, w):
        """``1/(w^2 phi(1/w))``, the integrand of ``int dv/phi`` after ``v = 1/w``."""
        return 1.0 / (w * self.ratio(1.0 / w))

    # closed-form hooks -------------------------------------------------
    def _antiderivative(self, u):
        """An antiderivative of ``1/phi`` or ``None``."""
        return None

    def _antiderivative_at_infinity(self):
        return None

    def _moment(self, s):
        r""":math:`\int_0^s v/\phi(v)\,dv` in closed form, or ``None``."""
        return None


class IdentityPhi(PhiFunction):
    """``phi(u) = u``; every deformed object reduces to its classical form."""

    degree = 1

    def ratio(self, u):
        return 1.0

    def _antiderivative(self, u):
        return math.log(u)

    def _antiderivative_at_infinity(self):
        return math.inf

    def _moment(self, s):
        return s

    def __eq__(self, other):
        return type(other) is IdentityPhi

    def __hash__(self):
        return hash(IdentityPhi)

    def __repr__(self):
        return "IdentityPhi()"


class EpsilonPhi(PhiFunction):
    """``phi(u) = u (1 + eps u)``; eps = 1, 0, -1 give Bose, Boltzmann, Fermi."""

    def __init__(self, eps):
        eps = float(eps)
        if not -1.0 <= eps <= 1.0:
            raise DomainError(f"eps must lie in [-1, 1], got {eps!r}")
        self.eps = eps
        self.upper = -1.0 / eps if eps < 0 else math.inf

    @property
    def degree(self):
        return 1 if self.eps == 0 else 2

    def ratio(self, u):
        return 1.0 + self.eps * u

    def _antiderivative(self, u):
        return math.log(u) - math.log1p(self.eps * u)

    def _antiderivative_at_infinity(self):
        if self.eps > 0:
            return -math.log(self.eps)
        return math.inf

    def _moment(self, s):
        x = self.eps * s
        if x == 0.0:
            return s
        return s * math.log1p(x) / x

    def __eq__(self, other):
        return type(other) is EpsilonPhi and other.eps == self.eps

    def __hash__(self):
        return hash((EpsilonPhi, self.eps))

    def __repr__(self):
        return f"EpsilonPhi(eps={self.eps!r})"


class HaldanePhi(PhiFunction):
    """``phi(u) = u (1 - g u)(1 + (1 - g) u)`` for exclusion parameter g."""

    def __init__(self, g):
        g = float(g)
        if not 0.0 <= g <= 1.0:
            raise DomainError(f"g must lie in [0, 1], got {g!r}")
        self.g = g
        self.upper = 1.0 / g if g > 0 else math.inf

    @property
    def degree(self):
        return 3 if 0 < self.g < 1 else 2

    def ratio(self, u):
        g = self.g
        return (1.0 - g * u) * (1.0 + (1.0 - g) * u)

    def _antiderivative(self, u):
        # partial fractions: 1/v + g^2/(1 - g v) - (1-g)^2/(1 + (1-g) v)
        g = self.g
        return math.log(u) - g * math.log1p(-g * u) - (1.0 - g) * math.log1p((1.0 - g) * u)

    def _antiderivative_at_infinity(self):
        return 0.0 if self.g == 0 else math.inf

    def _moment(self, s):
        g = self.g
        return math.log1p((1.0 - g) * s) - math.log1p(-g * s)

    def __eq__(self, other):
        return type(other) is HaldanePhi and other.g == self.g

    def __hash__(self):
        return hash((HaldanePhi, self.g))

    def __repr__(self):
        return f"HaldanePhi(g={self.g!r})"


class SeriesPhi(PhiFunction):
    """Truncated series deformation ``phi(u) = u - sum_k T_k u^(k+1)``.

    The validity interval ends just below the smallest positive zero of phi
    (relative margin 1e-12); without one it is ``(0, inf)``.  Only
    evaluation and quadrature-based operations are supported.
    """

    def __init__(self, coefficients):
        coeffs = [float(t) for t in coefficients]
        while coeffs and coeffs[-1] == 0.0:
            coeffs.pop()
        if not all(math.isfinite(t) for t in coeffs):
            raise DomainError("series coefficients must be finite")
        self.coefficients = tuple(coeffs)
        # phi(u)/u = 1 - T_1 u - T_2 u^2 - ...
        self._poly = np.polynomial.Polynomial([1.0] + [-t for t in coeffs])
        self._reversed = np.polynomial.Polynomial(self._poly.coef[::-1])
        self.upper = self._first_positive_zero()

    def _first_positive_zero(self):
        if not self.coefficients:
            return math.inf
        roots = self._poly.roots()
        real = [r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and r.real > 0]
        if not real:
            return math.inf
        r = min(real)
        # polish on a sign change when there is one (simple root)
        lo, hi = r * (1 - 1e-6), r * (1 + 1e-6)
        if self._poly(lo) > 0 > self._poly(hi):
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid in (lo, hi):
                    break
                if self._poly(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            r = lo
        return float(r) * (1.0 - _SERIES_MARGIN)

    @property
    def degree(self):
        return len(self.coefficients) + 1

    def ratio(self, u):
        return float(self._poly(u))

    def tail_density(self, w):
        # w^m ratio(1/w) is the reversed polynomial; avoids overflow as w -> 0
        m = len(self.coefficients)
        return w ** (m - 1) / float(self._reversed(w))

    def __eq__(self, other):
        return type(other) is SeriesPhi and other.coefficients == self.coefficients

    def __hash__(self):
        return hash((SeriesPhi, self.coefficients))

    def __repr__(self):
        return f"SeriesPhi({list(self.coefficients)!r})"


def _check_domain(phi, u, what="u"):
    if not (u > 0.0):
        raise DomainError(f"{what} must be positive, got {u!r}")
    if not u < phi.upper:
        raise DomainError(f"{what}={u!r} outside the validity interval (0, {phi.upper!r}) of {phi!r}")


def _closed(phi, method):
    if method not in ("auto", "quad"):
        raise ValueError(f"unknown method {method!r}")
    return method == "auto" and not isinstance(phi, SeriesPhi)


def _quad(f, a, b, cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                f, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc).strip().splitlines()[0]) from None
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite integral on [{a!r}, {b!r}]")
    return value


def phi_eval(phi, u):
    """Evaluate the deformation function at ``u`` inside its validity interval."""
    u = float(u)
    _check_domain(phi, u)
    if isinstance(phi, IdentityPhi):
        return u
    if isinstance(phi, EpsilonPhi):
        return u * (1.0 + phi.eps * u)
    if isinstance(phi, HaldanePhi):
        g = phi.g
        return u * (1.0 - g * u) * (1.0 + (1.0 - g) * u)
    return u * phi.ratio(u)


def _check_base_point(phi):
    if not phi.contains(1.0):
        raise DomainError(f"{phi!r} is not defined at the base point 1; ln_phi does not exist")


def ln_phi(phi, u, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Deformed logarithm :math:`\int_1^u dv/\phi(v)`.

    Families whose validity interval ends at or below 1 (``eps=-1``,
    ``g=1``) have no deformed logarithm and raise :class:`DomainError`.
    """
    u = float(u)
    _check_domain(phi, u)
    _check_base_point(phi)
    if u == 1.0:
        return 0.0
    if _closed(phi, method):
        return phi._antiderivative(u) - phi._antiderivative(1.0)
    if u > 2.0 and not math.isfinite(phi.upper) and phi.degree >= 2:
        # far out, subtract the convergent tail from the total instead
        return _log_total(phi, cfg) - _tail(phi, u, cfg)
    return _quad(lambda v: 1.0 / (v * phi.ratio(v)), 1.0, u, cfg)


def _tail(phi, u, cfg):
    # w = 1/v maps [u, inf) onto (0, 1/u]
    return _quad(phi.tail_density, 0.0, 1.0 / u, cfg)


@functools.lru_cache(maxsize=64)
def _log_total(phi, cfg):
    """``int_1^inf dv/phi`` for a superlinear phi without zeros."""
    return _tail(phi, 1.0, cfg)


def ln_phi_range(phi, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Open range ``(lo, hi)`` of :math:`\ln_\phi` over the validity interval.

    Near 0 every family behaves like ``u`` so ``lo`` is always ``-inf``.  A
    finite ``upper`` is a zero of phi and makes ``hi`` infinite; an infinite
    ``upper`` gives a finite ``hi`` exactly when ``phi`` grows faster than
    ``u``.
    """
    _check_base_point(phi)
    lo = -math.inf
    if math.isfinite(phi.upper) or phi.degree < 2:
        return lo, math.inf
    if _closed(phi, method):
        return lo, phi._antiderivative_at_infinity() - phi._antiderivative(1.0)
    return lo, _log_total(phi, cfg)


def exp_phi(phi, x, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Inverse of :func:`ln_phi`, by bracketed Newton iteration in :math:`\log u`.

    Raises :class:`RangeError` when ``x`` lies outside the open range of
    :math:`\ln_\phi`.
    """
    x = float(x)
    _check_base_point(phi)
    if x == 0.0:
        return 1.0
    lo_x, hi_x = ln_phi_range(phi, cfg, method)
    if not lo_x < x < hi_x:
        side = "small" if x <= lo_x else "large"
        raise RangeError(f"x={x!r} is too {side} for the range ({lo_x!r}, {hi_x!r}) of ln_phi")

    log_upper = min(math.log(phi.upper), _LOG_HUGE)

    def h(t):
        return ln_phi(phi, math.exp(t), cfg, method) - x

    def dh(t):
        u = math.exp(t)
        return 1.0 / phi.ratio(u)

    if x < 0:
        lo, hi = math.log(1e-12), 0.0
    else:
        lo, hi = 0.0, min(math.log(1e12), 0.5 * math.log(phi.upper))
    lo, hi = expand_bracket(h, lo, hi, lower=_LOG_TINY, upper=log_upper, maxiter=cfg.max_root_iters)
    t = newton_bisect(h, dh, lo, hi, maxiter=cfg.max_root_iters)
    resid = h(t)
    if abs(resid) > cfg.root_tol and not _straddles(h, t):
        raise ConvergenceError(f"exp_phi residual {abs(resid)!r} exceeds root_tol")
    return math.exp(t)


def _straddles(h, t, ulps=4):
    """True when ``h`` changes sign within a few floats of ``t``, i.e. the
    residual is limited by the conditioning of ``h`` rather than the solver."""
    lo = hi = t
    for _ in range(ulps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
    return (h(lo) > 0) != (h(hi) > 0)


def psi_eval(phi, x, cfg=DEFAULT_CONFIG, method="auto"):
    r""":math:`\psi(x) = \phi(\exp_\phi(x))`, extended by 0 below and
    :data:`PSI_INFINITY` above the range of :math:`\ln_\phi`."""
    x = float(x)
    lo_x, hi_x = ln_phi_range(phi, cfg, method)
    if x <= lo_x:
        return 0.0
    if x >= hi_x:
        return PSI_INFINITY
    return phi_eval(phi, exp_phi(phi, x, cfg, method))


def _moment(phi, s, cfg, method):
    if _closed(phi, method):
        return phi._moment(s)
    return _quad(lambda v: 1.0 / phi.ratio(v), 0.0, s, cfg)


def chi_eval(phi, u, cfg=DEFAULT_CONFIG, method="auto"):
    r""":math:`\chi(u) = 1/\int_0^{1/u} v/\phi(v)\,dv`."""
    u = float(u)
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    _check_domain(phi, 1.0 / u, "1/u")
    return 1.0 / _moment(phi, 1.0 / u, cfg, method)


def chi_log(phi, u, cfg=DEFAULT_CONFIG, method="auto"):
    r""":math:`\ln_\chi(u) = \int_1^u dv/\chi(v)` by quadrature over :func:`chi_eval`."""
    u = float(u)
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    if u == 1.0:
        return 0.0
    return _quad(lambda v: 1.0 / chi_eval(phi, v, cfg, method), 1.0, u, cfg)


def deduced_log(phi, u, cfg=DEFAULT_CONFIG, method="auto"):
    r"""Deduced logarithm

    .. math::

        \omega_\phi(u) = u\int_0^{1/u}\frac{v\,dv}{\phi(v)}
            - \int_0^1\frac{v\,dv}{\phi(v)} - \ln_\phi(1/u),

    which vanishes at 1 and has derivative :math:`1/\chi(u)`.
    """
    u = float(u)
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    _check_domain(phi, 1.0 / u, "1/u")
    _check_base_point(phi)
    if u == 1.0:
        return 0.0
    s = 1.0 / u
    return u * _moment(phi, s, cfg, method) - _moment(phi, 1.0, cfg, method) - ln_phi(phi, s, cfg, method)


def mod_ln_phi(phi, u):
    r"""Modified logarithm, an antiderivative of :math:`-1/\phi` normalised by
    the closed forms

    .. math::

        \widetilde{\ln}_{\phi_\epsilon}(u) = \ln\frac{1+\epsilon u}{u}, \qquad
        \widetilde{\ln}_{\phi_g}(u) = \ln\frac{(1+(1-g)u)^{1-g}(1-gu)^g}{u}.

    Only the closed-form families are supported; ``IdentityPhi`` is the
    ``eps = 0`` case, ``-ln u``.
    """
    u = float(u)
    if isinstance(phi, SeriesPhi):
        raise DomainError("the modified logarithm is only available for closed-form families")
    _check_domain(phi, u)
    return -phi._antiderivative(u)


def _eps_denominator(eta, eps):
    """``exp(eta) - eps`` for scalars or arrays, without cancellation when
    ``exp(eta)`` is close to a positive ``eps``."""
    eta = np.asarray(eta, dtype=float)
    with np.errstate(over="ignore"):
        if eps <= 0:
            return np.exp(eta) - eps
        return eps * np.expm1(eta - math.log(eps))


def mod_exp_phi(phi, eta, cfg=DEFAULT_CONFIG):
    r"""Inverse of :func:`mod_ln_phi`: the occupation weight at natural argument ``eta``.

    ``EpsilonPhi`` gives :math:`1/(e^\eta - \epsilon)`; ``HaldanePhi`` solves
    the Wu equation and returns :math:`1/(\omega(\eta) + g)`.
    """
    from .wu import wu_weight

    eta = float(eta)
    if isinstance(phi, SeriesPhi):
        raise DomainError("the modified exponential is only available for closed-form families")
    if isinstance(phi, HaldanePhi):
        return wu_weight(phi.g, eta, cfg)
    eps = phi.eps if isinstance(phi, EpsilonPhi) else 0.0
    if eta > 700.0:
        return math.exp(-eta)
    denom = float(_eps_denominator(eta, eps))
    if not denom > 0:
        raise RangeError(f"exp(eta) - eps = {denom!r} is not positive (eta={eta!r}, eps={eps!r})")
    return 1.0 / denom
