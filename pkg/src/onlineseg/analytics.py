"""Closed-form migration probability from a fully integrated community.

An agent in a perfectly mixed community samples ``k`` peers, each of which
shares its opinion with probability one half, and migrates when the number
of similar peers is at most ``floor(theta * k)``.  The probability is the
lower tail of a Binomial(k, 1/2), which is a dyadic rational; it is kept
exact as a :class:`fractions.Fraction` internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from onlineseg.exceptions import CapacityError, ParameterError

SNAP_TOLERANCE = 1e-9
BRUTE_FORCE_MAX_K = 24


def threshold_count(theta: float, k: int) -> int:
    """Largest similar-peer count that still triggers a move.

    ``floor(theta * k)``, except that products within ``SNAP_TOLERANCE`` of an
    integer snap to it, so that e.g. ``theta=15/22, k=22`` gives 15 and not 14.
    """
    product = theta * k
    nearest = round(product)
    if abs(product - nearest) < SNAP_TOLERANCE:
        return int(nearest)
    return math.floor(product)


def _check(k: int, theta: float) -> None:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not 0.0 <= theta <= 1.0:
        raise ParameterError(f"theta must lie in [0, 1], got {theta!r}")


def binomial_migration_fraction(k: int, theta: float) -> Fraction:
    """Exact migration probability as a dyadic rational."""
    _check(k, theta)
    k = int(k)
    m = min(threshold_count(theta, k), k)
    numerator = sum(math.comb(k, i) for i in range(m + 1))
    return Fraction(numerator, 2**k)


def binomial_migration_prob(k: int, theta: float) -> float:
    """Probability of migrating from a 50/50 community after sampling ``k`` peers.

    >>> binomial_migration_prob(10, 0.05)
    0.0009765625
    >>> binomial_migration_prob(10, 0.15)
    0.0107421875
    """
    return float(binomial_migration_fraction(k, theta))


def brute_force_migration_fraction(k: int, theta: float) -> Fraction:
    """Enumerate all ``2**k`` similar/dissimilar outcome strings.

    Independent of :func:`binomial_migration_fraction`: theta is read as the
    exact decimal it was written as (``Fraction(repr(theta))``), and every
    outcome string is tested with rational arithmetic.
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if k > BRUTE_FORCE_MAX_K:
        raise CapacityError(f"k={k} exceeds enumeration bound {BRUTE_FORCE_MAX_K}")
    if not 0.0 <= theta <= 1.0:
        raise ParameterError(f"theta must lie in [0, 1], got {theta!r}")
    limit = Fraction(repr(float(theta))) * k
    hits = sum(1 for outcome in range(2**k) if outcome.bit_count() <= limit)
    return Fraction(hits, 2**k)


def brute_force_migration_prob(k: int, theta: float) -> float:
    return float(brute_force_migration_fraction(k, theta))


@dataclass(frozen=True)
class LandscapeGrid:
    """Migration probability over a (k, theta) grid.

    ``log10_probabilities`` holds ``-inf`` where the probability is zero.
    """

    k_values: tuple[int, ...]
    theta_values: tuple[float, ...]
    probabilities: np.ndarray
    log10_probabilities: np.ndarray

    def rows(self):
        """Yield ``(k, theta, prob, log10_prob)`` in k-major order."""
        for i, k in enumerate(self.k_values):
            for j, theta in enumerate(self.theta_values):
                yield k, theta, self.probabilities[i, j], self.log10_probabilities[i, j]


def _exact_log10(p: Fraction) -> float:
    if p == 0:
        return -math.inf
    # numerator and denominator may exceed float range for large k
    return math.log10(p.numerator) - math.log10(p.denominator)


def _check_axis(values: Sequence, name: str) -> None:
    if len(values) == 0:
        raise ParameterError(f"{name} must be non-empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ParameterError(f"{name} must be strictly ascending")


def migration_landscape(k_values: Sequence[int], theta_values: Sequence[float]) -> LandscapeGrid:
    _check_axis(k_values, "k_values")
    _check_axis(theta_values, "theta_values")
    probs = np.empty((len(k_values), len(theta_values)))
    logs = np.empty_like(probs)
    for i, k in enumerate(k_values):
        for j, theta in enumerate(theta_values):
            exact = binomial_migration_fraction(k, theta)
            probs[i, j] = float(exact)
            logs[i, j] = _exact_log10(exact)
    return LandscapeGrid(
        k_values=tuple(int(k) for k in k_values),
        theta_values=tuple(float(t) for t in theta_values),
        probabilities=probs,
        log10_probabilities=logs,
    )
