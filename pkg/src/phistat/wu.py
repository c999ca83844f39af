r"""Fractional exclusion statistics.

For exclusion parameter :math:`g\in[0,1]` the occupation weight is
:math:`1/(\omega + g)` where :math:`\omega > 0` solves

.. math::

    \omega^g (1+\omega)^{1-g} = e^\eta .

``g = 0`` is Bose-Einstein, ``g = 1`` Fermi-Dirac.  The natural argument is
:math:`\eta = a + bE`, so both endpoints read :math:`1/(e^\eta \mp 1)`.

The numeric route works in :math:`t = \ln\omega`, where the equation
becomes :math:`g t + (1-g)\,\mathrm{softplus}(t) = \eta` with a strictly
increasing left side; an analytic bracket follows from
:math:`\max(0,t) \le \mathrm{softplus}(t) \le \max(0,t) + \ln 2`.
"""
import math

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import ConvergenceError, DomainError, NoPositiveRoot, RangeError

__all__ = ["wu_omega", "wu_weight", "wu_weights", "wu_stationarity_check"]

_LN2 = math.log(2.0)
# |ln omega| beyond this is far outside the float range of omega itself
_T_LIMIT = 1e300


def _check_g(g):
    g = float(g)
    if not 0.0 <= g <= 1.0:
        raise DomainError(f"g must lie in [0, 1], got {g!r}")
    return g


def _softplus(t):
    return np.logaddexp(0.0, t)


def _inverse_hinge(y, g):
    # inverse of t -> g t + (1 - g) max(0, t), kept finite for tiny g
    with np.errstate(over="ignore"):
        return np.where(y >= 0, y, np.maximum(y / g, -_T_LIMIT))


def _log_omega_newton(g, eta, maxiter):
    """Vectorised safeguarded Newton for ``t = ln(omega)``; requires ``g > 0``."""
    eta = np.asarray(eta, dtype=float)
    lo = _inverse_hinge(eta - (1.0 - g) * _LN2, g)
    hi = _inverse_hinge(eta, g)
    t = np.clip(eta, lo, hi)
    scale = np.maximum(1.0, np.abs(eta))
    for _ in range(maxiter):
        f = g * t + (1.0 - g) * _softplus(t) - eta
        done = np.abs(f) <= 4 * np.finfo(float).eps * scale
        if np.all(done):
            return t
        lo = np.where(f < 0, t, lo)
        hi = np.where(f > 0, t, hi)
        slope = g + (1.0 - g) * 0.5 * (1.0 + np.tanh(0.5 * t))
        with np.errstate(over="ignore", invalid="ignore"):
            step = t - f / slope
        bad = ~((step > lo) & (step < hi))
        t_new = np.where(bad, 0.5 * (lo + hi), step)
        # a bracket that has collapsed to adjacent floats is converged too
        stuck = (t_new == t) | (hi - lo <= 2 * np.spacing(np.abs(t)))
        t = np.where(done, t, t_new)
        if np.all(done | stuck):
            return t
    raise ConvergenceError(f"Wu equation did not converge in {maxiter} iterations (g={g!r})")


def _omega_closed(g, eta):
    if g == 1.0:
        return np.exp(eta)
    if g == 0.0:
        return np.expm1(eta)
    # g == 1/2: omega (1 + omega) = exp(2 eta), cancellation-free root
    z = np.exp(2.0 * eta)
    return 2.0 * z / (1.0 + np.sqrt(1.0 + 4.0 * z))


def _omega_array(g, eta, cfg, method):
    if method not in ("auto", "newton"):
        raise ValueError(f"unknown method {method!r}")
    eta = np.asarray(eta, dtype=float)
    if not np.all(np.isfinite(eta)):
        raise DomainError("eta must be finite")
    if g == 0.0:
        if np.any(eta <= 0):
            raise NoPositiveRoot("g = 0 needs eta > 0 for a positive root (Bose condensation edge)")
        if method == "auto":
            return np.expm1(eta)
        # softplus(t) = eta  <=>  t = log(expm1(eta)); Newton still applies
        return np.exp(_log_omega_newton_g0(eta, cfg.max_root_iters))
    if method == "auto" and (g == 1.0 or (g == 0.5 and np.all(eta < 300))):
        return _omega_closed(g, eta)
    return np.exp(_log_omega_newton(g, eta, cfg.max_root_iters))


def _log_omega_newton_g0(eta, maxiter):
    t = np.where(eta > 1, eta, np.log(eta))
    for _ in range(maxiter):
        f = _softplus(t) - eta
        sig = 0.5 * (1.0 + np.tanh(0.5 * t))
        t_new = t - f / sig
        if np.all(np.abs(t_new - t) <= 4 * np.spacing(np.maximum(1.0, np.abs(t)))):
            return t_new
        t = t_new
    raise ConvergenceError(f"Wu equation did not converge in {maxiter} iterations (g=0)")


def wu_omega(g, eta, cfg=DEFAULT_CONFIG, method="auto"):
    """Positive root ``omega`` of the Wu equation.

    ``method="auto"`` uses the closed forms for ``g`` in {0, 1/2, 1};
    ``method="newton"`` always iterates (useful to cross-check them).

    Raises
    ------
    NoPositiveRoot
        for ``g = 0`` and ``eta <= 0``.
    RangeError
        when omega is positive but below the smallest double (tiny ``g``,
        negative ``eta``).
    """
    g = _check_g(g)
    omega = float(_omega_array(g, float(eta), cfg, method))
    if omega == 0.0:
        raise RangeError(f"omega underflows for g={g!r}, eta={eta!r}; the weight is 1/g to double precision")
    return omega


def wu_weights(g, eta, cfg=DEFAULT_CONFIG, method="auto"):
    """Array version of :func:`wu_weight`."""
    g = _check_g(g)
    omega = _omega_array(g, eta, cfg, method)
    with np.errstate(divide="ignore", over="ignore"):
        p = 1.0 / (omega + g)
    if not np.all(np.isfinite(p)):
        raise RangeError(f"the weight 1/g overflows for g={g!r}")
    return p


def wu_weight(g, eta, cfg=DEFAULT_CONFIG, method="auto"):
    """Occupation weight ``1 / (omega(eta) + g)``; never exceeds ``1/g``."""
    return float(wu_weights(g, float(eta), cfg, method))


def wu_stationarity_check(g, p, eta):
    """Residual ``|(1+(1-g)p)^(1-g) (1-gp)^g / p - exp(eta)|``.

    It vanishes exactly at ``p = wu_weight(g, eta)``.
    """
    g = _check_g(g)
    p = float(p)
    if not p > 0 or (g > 0 and not g * p < 1):
        raise DomainError(f"p={p!r} outside (0, 1/g) for g={g!r}")
    lhs = (1.0 + (1.0 - g) * p) ** (1.0 - g) * (1.0 - g * p) ** g / p
    return abs(lhs - math.exp(eta))
