"""Segregation readings on a model state.

``phi`` is the chance that a random agent, talking to a random member of its
own community (drawn with replacement), meets the opposite opinion.  It is 0
for a fully sorted population and 0.5 under perfect mixing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from onlineseg.exceptions import MetricError
from onlineseg.model import ModelState

DEFAULT_MARGIN = 0.05


@dataclass(frozen=True)
class SegregationReading:
    phi: float
    homophily: float
    homogeneous_agent_fraction: float


def _populated(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sizes = counts.sum(axis=1)
    mask = sizes > 0
    if not mask.any():
        raise MetricError("all communities are empty")
    return counts[mask], sizes[mask]


def disagreement_phi(state: ModelState) -> float:
    counts, sizes = _populated(state.counts)
    total = sizes.sum()
    p = counts[:, 1] / sizes
    return float(np.sum(sizes / total * 2.0 * p * (1.0 - p)))


def disagreement_phi_without_replacement(state: ModelState) -> float:
    """Alternate phi where the interaction partner is a *different* agent.

    Singletons have no partner and carry no weight.  Exceeds 0.5 for small
    balanced communities, e.g. 5/9 for a (5, 5) community.
    """
    counts, sizes = _populated(state.counts)
    keep = sizes > 1
    if not keep.any():
        raise MetricError("no community has two or more agents")
    counts, sizes = counts[keep], sizes[keep]
    cross = 2.0 * counts[:, 0] * counts[:, 1] / (sizes * (sizes - 1))
    return float(np.sum(sizes / sizes.sum() * cross))


def homogeneous_agent_fraction(state: ModelState) -> float:
    counts, sizes = _populated(state.counts)
    pure = (counts[:, 0] == 0) | (counts[:, 1] == 0)
    return float(sizes[pure].sum() / sizes.sum())


def segregation_reading(state: ModelState) -> SegregationReading:
    phi = disagreement_phi(state)
    return SegregationReading(
        phi=phi,
        homophily=1.0 - phi,
        homogeneous_agent_fraction=homogeneous_agent_fraction(state),
    )


def community_opinion_means(state: ModelState) -> list[tuple[int, Optional[float]]]:
    """Mean opinion per community; ``None`` marks an empty community."""
    means = []
    for c, (zeros, ones) in enumerate(state.counts.tolist()):
        size = zeros + ones
        means.append((c, ones / size if size else None))
    return means


def schelling_effect_flag(
    reading: SegregationReading, theta: float, margin: float = DEFAULT_MARGIN
) -> bool:
    """Observed same-opinion interaction beats both theta and random mixing."""
    return reading.homophily > theta and reading.homophily > 0.5 + margin


def literal_schelling_flag(phi: float, theta: float) -> bool:
    # phi > theta as literally stated; fires for any well-mixed state
    return phi > theta
