"""Simulated move frequency against the closed-form binomial tail."""

import math

import pytest
from scipy import stats

from conftest import state_from
from onlineseg.analytics import binomial_migration_prob, threshold_count
from onlineseg.model import decide_move, make_rng, sample_interactors

TRIALS = 100_000


@pytest.mark.parametrize("theta", [0.15, 0.25])
def test_large_balanced_community_matches_binomial(theta):
    k = 10
    state = state_from([[500, 500]])
    rng = make_rng(31)
    moves = sum(
        decide_move(*reversed(sample_interactors(state, (0, 0), k, rng)), theta) for _ in range(TRIALS)
    )
    p = binomial_migration_prob(k, theta)
    se = math.sqrt(p * (1 - p) / TRIALS)
    assert abs(moves / TRIALS - p) <= 3 * se
    # the sampler is hypergeometric; its gap to the binomial stays under one standard error
    exact = stats.hypergeom.cdf(threshold_count(theta, k), 999, 499, k)
    assert abs(exact - p) < se
