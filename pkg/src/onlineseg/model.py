"""Agents, communities and the relocation dynamics.

Agents with the same opinion in the same community are interchangeable, so
the whole state is a ``(n_communities, 2)`` table of opinion counts.  Drawing
``k`` distinct peers from a community then reduces to one hypergeometric draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from onlineseg.analytics import threshold_count
from onlineseg.exceptions import ParameterError, StateError

Observer = Callable[[int, "ModelState"], None]


@dataclass(frozen=True)
class ModelParams:
    """Free parameters of one simulation run.

    ``theta`` may be negative (agents never move), which is handy in tests;
    values above 1 are rejected.
    """

    n_agents: int = 100
    n_communities: int = 20
    k_interactors: int = 10
    theta: float = 0.1
    max_steps: int = 100_000
    seed: int = 0
    balanced_init: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.n_agents < 2:
            raise ParameterError(f"n_agents must be >= 2, got {self.n_agents}")
        if self.n_communities < 2:
            raise ParameterError(f"n_communities must be >= 2, got {self.n_communities}")
        if self.k_interactors < 1:
            raise ParameterError(f"k_interactors must be >= 1, got {self.k_interactors}")
        if not self.theta <= 1.0:
            raise ParameterError(f"theta must be <= 1, got {self.theta}")
        if self.max_steps < 0:
            raise ParameterError(f"max_steps must be >= 0, got {self.max_steps}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def replace(self, **changes) -> "ModelParams":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return ModelParams(**values)


@dataclass
class ModelState:
    """Per-community opinion counts; ``counts[c, o]`` agents of opinion ``o`` in ``c``."""

    counts: np.ndarray
    step: int = 0

    @property
    def n_agents(self) -> int:
        return int(self.counts.sum())

    @property
    def n_communities(self) -> int:
        return self.counts.shape[0]

    def opinion_totals(self) -> tuple[int, int]:
        totals = self.counts.sum(axis=0)
        return int(totals[0]), int(totals[1])

    def copy(self) -> "ModelState":
        return ModelState(self.counts.copy(), self.step)

    def snapshot(self) -> "ModelState":
        """Read-only copy handed to observers."""
        counts = self.counts.copy()
        counts.setflags(write=False)
        return ModelState(counts, self.step)

    def __eq__(self, other):
        if not isinstance(other, ModelState):
            return NotImplemented
        return self.step == other.step and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class StepOutcome:
    focal_community: int
    focal_opinion: int
    k_effective: int
    similar_count: int
    moved: bool
    destination: Optional[int] = None

    @property
    def similarity_share(self) -> Optional[float]:
        """Share of sampled peers holding the focal opinion; None with no peers."""
        if self.k_effective == 0:
            return None
        return self.similar_count / self.k_effective


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def init_state(params: ModelParams, rng: np.random.Generator) -> ModelState:
    """Place every agent in a uniform-random community and assign opinions.

    With ``balanced_init`` the opinions are an exact half/half split in
    shuffled order (the extra agent of an odd population holds opinion 0);
    otherwise each agent flips a fair coin.
    """
    params.validate()
    n = params.n_agents
    if params.balanced_init:
        opinions = np.zeros(n, dtype=np.int64)
        opinions[n - n // 2 :] = 1
        rng.shuffle(opinions)
    else:
        opinions = rng.integers(0, 2, size=n)
    communities = rng.integers(0, params.n_communities, size=n)
    counts = np.zeros((params.n_communities, 2), dtype=np.int64)
    np.add.at(counts, (communities, opinions), 1)
    return ModelState(counts, 0)


def select_focal(state: ModelState, rng: np.random.Generator) -> tuple[int, int]:
    """Draw a uniformly random agent and return its ``(community, opinion)``."""
    cumulative = np.cumsum(state.counts.ravel())
    total = int(cumulative[-1]) if cumulative.size else 0
    if total <= 0:
        raise StateError("cannot select a focal agent from an empty state")
    index = int(np.searchsorted(cumulative, rng.integers(total), side="right"))
    community, opinion = divmod(index, 2)
    return community, opinion


def sample_interactors(
    state: ModelState, focal: tuple[int, int], k: int, rng: np.random.Generator
) -> tuple[int, int]:
    """Sample up to ``k`` distinct other agents from the focal community.

    Returns ``(k_effective, similar_count)`` with ``k_effective = min(k, n_c - 1)``.
    """
    community, opinion = focal
    same = int(state.counts[community, opinion]) - 1
    other = int(state.counts[community, 1 - opinion])
    if same < 0:
        raise StateError(f"no agent with opinion {opinion} in community {community}")
    k_effective = min(k, same + other)
    if k_effective == 0:
        return 0, 0
    return k_effective, int(rng.hypergeometric(same, other, k_effective))


def decide_move(similar_count: int, k_effective: int, theta: float) -> bool:
    """True when the agent is dissatisfied (similar share at or below theta).

    An agent with nobody to talk to stays put.
    """
    if k_effective == 0:
        return False
    return similar_count <= threshold_count(theta, k_effective)


def relocate(state: ModelState, focal: tuple[int, int], rng: np.random.Generator) -> int:
    """Move one focal agent to a uniformly chosen *other* community, in place.

    Returns the destination index.
    """
    community, opinion = focal
    if state.counts[community, opinion] < 1:
        raise StateError(f"no agent with opinion {opinion} in community {community}")
    destination = int(rng.integers(state.n_communities - 1))
    if destination >= community:
        destination += 1
    state.counts[community, opinion] -= 1
    state.counts[destination, opinion] += 1
    return destination


def step(
    state: ModelState, params: ModelParams, rng: np.random.Generator
) -> tuple[ModelState, StepOutcome]:
    """Advance one focal-agent interaction.  Mutates and returns ``state``."""
    focal = select_focal(state, rng)
    k_effective, similar = sample_interactors(state, focal, params.k_interactors, rng)
    moved = decide_move(similar, k_effective, params.theta)
    destination = relocate(state, focal, rng) if moved else None
    state.step += 1
    return state, StepOutcome(focal[0], focal[1], k_effective, similar, moved, destination)


def run(
    params: ModelParams,
    observer: Optional[Observer] = None,
    stride: int = 1,
) -> ModelState:
    """Run ``params.max_steps`` steps from a fresh seeded initial state.

    The observer sees a read-only snapshot at step 0, every ``stride`` steps,
    and at the final step.
    """
    if stride < 1:
        raise ParameterError(f"stride must be >= 1, got {stride}")
    rng = make_rng(params.seed)
    state = init_state(params, rng)
    if observer is not None:
        observer(0, state.snapshot())
    for t in range(1, params.max_steps + 1):
        step(state, params, rng)
        if observer is not None and (t % stride == 0 or t == params.max_steps):
            observer(t, state.snapshot())
    return state
