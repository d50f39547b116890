"""Mixing order of spectra via partial-sum dominance.

Convention: ``a`` is *less mixed* than ``b`` when every partial sum of the
descending spectrum of ``a`` is at least the corresponding partial sum of
``b``.  In textbook majorization language, "b is more mixed than a" is the
statement "a majorizes b".  Spectra of different length are zero-padded.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import ValidationError
from .quantum_core import Spectrum

DOMINANCE_TOL = 1e-12


class MixingComparison(enum.Enum):
    LEFT_LESS_MIXED = "left-less-mixed"
    RIGHT_LESS_MIXED = "right-less-mixed"
    EQUALLY_MIXED = "equally-mixed"
    INCOMPARABLE = "incomparable"

    def swapped(self) -> MixingComparison:
        if self is MixingComparison.LEFT_LESS_MIXED:
            return MixingComparison.RIGHT_LESS_MIXED
        if self is MixingComparison.RIGHT_LESS_MIXED:
            return MixingComparison.LEFT_LESS_MIXED
        return self


def _values(s) -> np.ndarray:
    if isinstance(s, Spectrum):
        return s.eigenvalues
    lam = np.asarray(s, dtype=np.float64).ravel()
    if np.any(np.diff(lam) > DOMINANCE_TOL):
        raise ValidationError("spectrum must be sorted in descending order")
    return Spectrum(lam).eigenvalues


def partial_sums(s: Spectrum) -> np.ndarray:
    """Cumulative sums of the descending eigenvalues."""
    return np.cumsum(_values(s))


def compare_mixing(a: Spectrum, b: Spectrum) -> MixingComparison:
    """Decide which spectrum is more mixed, if either."""
    la, lb = _values(a), _values(b)
    n = max(la.size, lb.size)
    sa = np.cumsum(np.pad(la, (0, n - la.size)))
    sb = np.cumsum(np.pad(lb, (0, n - lb.size)))
    diff = sa - sb
    a_dominates = bool(np.all(diff >= -DOMINANCE_TOL))
    b_dominates = bool(np.all(diff <= DOMINANCE_TOL))
    if a_dominates and b_dominates:
        return MixingComparison.EQUALLY_MIXED
    if a_dominates:
        return MixingComparison.LEFT_LESS_MIXED
    if b_dominates:
        return MixingComparison.RIGHT_LESS_MIXED
    return MixingComparison.INCOMPARABLE


def more_mixed(a: Spectrum, b: Spectrum) -> bool:
    """True when ``b`` is more mixed than (or as mixed as) ``a``."""
    return compare_mixing(a, b) in (
        MixingComparison.LEFT_LESS_MIXED,
        MixingComparison.EQUALLY_MIXED,
    )


def random_spectrum(rng: np.random.Generator, dim: int) -> Spectrum:
    """Uniform draw from the probability simplex, sorted descending."""
    return Spectrum.from_values(rng.dirichlet(np.ones(dim)))
