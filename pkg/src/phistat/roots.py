"""Safeguarded Newton iteration for monotone scalar equations.

Every implicit equation in the package (inverse deformed logarithms, the
Wu equation, the Lagrange multipliers) is a monotone scalar equation with a
cheap analytic derivative, so one bracketed Newton/bisection hybrid serves
them all.
"""
import math

from .errors import ConvergenceError, RangeError

__all__ = ["newton_bisect", "expand_bracket", "solve_monotone"]


def newton_bisect(f, fprime, lo, hi, x0=None, ftol=0.0, xtol=4e-16, maxiter=200):
    """Find a root of ``f`` in ``[lo, hi]``.

    ``f(lo)`` and ``f(hi)`` must differ in sign.  Newton steps are taken from
    ``x0`` (midpoint by default) and replaced by bisection whenever they
    leave the current bracket or fail to halve it.

    Parameters
    ----------
    f, fprime : callable
        The function and its derivative.
    lo, hi : float
        Bracket end points.
    x0 : float, optional
        Starting point inside the bracket.
    ftol : float
        Stop as soon as ``|f(x)| <= ftol``.
    xtol : float
        Relative bracket width at which to stop (relative to ``|x|``).
    maxiter : int
        Iteration budget.

    Returns
    -------
    float
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RangeError(f"no sign change on [{lo!r}, {hi!r}]")
    # orient so that f(lo) < 0 < f(hi)
    if flo > 0:
        lo, hi = hi, lo

    x = 0.5 * (lo + hi) if x0 is None or not (min(lo, hi) < x0 < max(lo, hi)) else x0
    width_old = abs(hi - lo)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0 or abs(fx) <= ftol:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        dfx = fprime(x)
        newton_ok = dfx != 0.0 and math.isfinite(dfx)
        if newton_ok:
            x_new = x - fx / dfx
            newton_ok = min(lo, hi) < x_new < max(lo, hi) and abs(x_new - x) < 0.5 * width_old
        if not newton_ok:
            x_new = 0.5 * (lo + hi)
        width_old = abs(x_new - x)
        if abs(hi - lo) <= xtol * abs(x_new) + 1e-300 or x_new == x:
            return x_new
        x = x_new
    raise ConvergenceError(f"no convergence after {maxiter} iterations (last x={x!r})")


def expand_bracket(f, lo, hi, lower=-math.inf, upper=math.inf, maxiter=200):
    """Grow ``[lo, hi]`` geometrically until ``f`` changes sign.

    The interval is never pushed past the open limits ``(lower, upper)``;
    a side that would cross a limit instead moves halfway toward it.
    """
    flo, fhi = f(lo), f(hi)
    for _ in range(maxiter):
        if (flo > 0) != (fhi > 0) or flo == 0.0 or fhi == 0.0:
            return lo, hi
        width = hi - lo
        # move the end that is on the wrong side of the root
        increasing_side_high = abs(flo) > abs(fhi)
        if increasing_side_high:
            new = hi + width
            hi = new if new < upper else 0.5 * (hi + upper)
            fhi = f(hi)
        else:
            new = lo - width
            lo = new if new > lower else 0.5 * (lo + lower)
            flo = f(lo)
    raise RangeError(f"could not bracket a root starting from [{lo!r}, {hi!r}]")


def solve_monotone(f, fprime, lo, hi, x0=None, lower=-math.inf, upper=math.inf, ftol=0.0, maxiter=200):
    """Bracket with :func:`expand_bracket`, then polish with :func:`newton_bisect`.

    Function values are cached so that bracket end points are not evaluated
    twice.
    """
    cache = {}

    def cached(x):
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    lo, hi = expand_bracket(cached, lo, hi, lower=lower, upper=upper, maxiter=maxiter)
    return newton_bisect(cached, fprime, lo, hi, x0=x0, ftol=ftol, maxiter=maxiter)
