"""Probability simplex and its mean-energy slices.

A :class:`SimplexPoint` is a strictly positive probability vector; an
:class:`EnergySpectrum` is a strictly increasing list of levels; a
:class:`MomentConstraint` pairs a spectrum with a target mean energy strictly
between the lowest and highest level.
"""
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, InfeasibleConstraint, InvalidSimplexPoint
from .roots import solve_monotone

__all__ = [
    "SUM_TOL",
    "SimplexPoint",
    "EnergySpectrum",
    "MomentConstraint",
    "validate",
    "mean_energy",
    "boltzmann_point",
    "boltzmann_beta",
    "feasible_point",
    "load_spectrum",
]

SUM_TOL = 1e-12


def _frozen_array(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen_array(self.p))

    def __len__(self):
        return len(self.p)

    def __iter__(self):
        return iter(self.p)

    def __array__(self, dtype=None, copy=None):
        return self.p if dtype is None else self.p.astype(dtype)


@dataclass(frozen=True, eq=False)
class EnergySpectrum:
    E: np.ndarray

    def __post_init__(self):
        E = _frozen_array(self.E)
        if E.ndim != 1 or len(E) < 2:
            raise ValueError("a spectrum needs at least two levels")
        if not np.all(np.isfinite(E)):
            raise ValueError("energies must be finite")
        if not np.all(np.diff(E) > 0):
            raise ValueError("energies must be strictly increasing (merge degenerate levels first)")
        object.__setattr__(self, "E", E)

    def __len__(self):
        return len(self.E)

    def __array__(self, dtype=None, copy=None):
        return self.E if dtype is None else self.E.astype(dtype)


@dataclass(frozen=True, eq=False)
class MomentConstraint:
    spectrum: EnergySpectrum
    mean_energy: float

    def __post_init__(self):
        if not isinstance(self.spectrum, EnergySpectrum):
            object.__setattr__(self, "spectrum", EnergySpectrum(self.spectrum))
        object.__setattr__(self, "mean_energy", float(self.mean_energy))

    @property
    def is_interior(self):
        E = self.spectrum.E
        return bool(E[0] < self.mean_energy < E[-1])

    def check_interior(self):
        E = self.spectrum.E
        if not self.is_interior:
            raise InfeasibleConstraint(
                f"infeasible: mean energy {self.mean_energy!r} must lie strictly inside "
                f"({float(E[0])!r}, {float(E[-1])!r})"
            )


def validate(p):
    """Return ``p`` as a :class:`SimplexPoint` or raise :class:`InvalidSimplexPoint`."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or len(arr) < 2:
        raise InvalidSimplexPoint("a simplex point needs at least two entries")
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
        raise InvalidSimplexPoint("all probabilities must be strictly positive")
    total = math.fsum(arr)
    if abs(total - 1.0) > SUM_TOL:
        raise InvalidSimplexPoint(f"probabilities sum to {total!r}, not 1")
    return SimplexPoint(arr)


def mean_energy(p, spectrum):
    """Expected energy ``sum_i p_i E_i``."""
    p = np.asarray(p, dtype=float)
    E = np.asarray(spectrum, dtype=float)
    if p.shape != E.shape:
        raise DimensionMismatch(f"{len(p)} probabilities for {len(E)} levels")
    return math.fsum(p * E)


def boltzmann_point(spectrum, b):
    """Normalised weights proportional to ``exp(-b E_i)``."""
    E = np.asarray(spectrum, dtype=float)
    logits = -b * E
    p = np.exp(logits - np.logaddexp.reduce(logits))
    return p / math.fsum(p)


def feasible_point(constraint):
    """An interior point of the constrained simplex, of Boltzmann form.

    The mean energy of the Boltzmann weights is strictly decreasing in the
    inverse temperature ``b`` (its derivative is minus the energy variance),
    so ``b`` is found by bracketed Newton iteration.
    """
    constraint.check_interior()
    E = constraint.spectrum.E
    return SimplexPoint(boltzmann_point(E, boltzmann_beta(E, constraint.mean_energy)))


def boltzmann_beta(energies, target):
    """Inverse temperature ``b`` whose Boltzmann weights have mean ``target``."""
    E = np.asarray(energies, dtype=float)
    spread = E[-1] - E[0]

    def f(b):
        return float(np.dot(boltzmann_point(E, b), E)) - target

    def df(b):
        p = boltzmann_point(E, b)
        m = np.dot(p, E)
        return -float(np.dot(p, (E - m) ** 2))

    return solve_monotone(f, df, -1.0 / spread, 1.0 / spread, ftol=1e-14 * max(1.0, np.max(np.abs(E))))


def load_spectrum(source):
    """Read a spectrum document ``{"energies": [...], "mean_energy": x}``.

    ``source`` may be a path or an already parsed mapping.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            doc = json.load(fh)
    else:
        doc = source
    try:
        energies = doc["energies"]
        mean = doc["mean_energy"]
    except (KeyError, TypeError):
        raise ValueError('spectrum document must contain "energies" and "mean_energy"') from None
    return MomentConstraint(EnergySpectrum(energies), mean)
