"""Replicate batches, threshold sweeps and opinion time series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from joblib import Parallel, delayed
from scipy import stats

from onlineseg.exceptions import ParameterError, StatisticsError, SweepError
from onlineseg.metrics import community_opinion_means, disagreement_phi
from onlineseg.model import ModelParams, ModelState, run

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit integers."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, theta_index: int, replicate_index: int) -> int:
    """Seed for one sweep cell, reproducible without running the other cells."""
    h = _mix64((master + _GOLDEN) & _MASK64)
    h = _mix64((h + _GOLDEN * (theta_index + 1)) & _MASK64)
    return _mix64((h + _GOLDEN * (replicate_index + 1)) & _MASK64)


def confidence_interval(values: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    """Student-t interval for the mean with ``n - 1`` degrees of freedom."""
    n = len(values)
    if n < 2:
        raise StatisticsError(f"need at least 2 values for a confidence interval, got {n}")
    if not 0.0 < level < 1.0:
        raise StatisticsError(f"level must lie in (0, 1), got {level}")
    mean = math.fsum(values) / n
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    half = float(stats.t.ppf((1.0 + level) / 2.0, n - 1)) * sd / math.sqrt(n)
    return mean - half, mean + half


@dataclass
class TimeSeries:
    steps: list[int] = field(default_factory=list)
    community_means: list[list[Optional[float]]] = field(default_factory=list)
    phi_trace: list[float] = field(default_factory=list)
    final_state: Optional[ModelState] = None


def run_single(params: ModelParams, record_stride: int = 100) -> TimeSeries:
    """One run, recording community mean opinions and phi along the way."""
    series = TimeSeries()

    def record(t: int, state: ModelState) -> None:
        series.steps.append(t)
        series.community_means.append([m for _, m in community_opinion_means(state)])
        series.phi_trace.append(disagreement_phi(state))

    series.final_state = run(params, observer=record, stride=record_stride)
    return series


@dataclass(frozen=True)
class SweepConfig:
    """``base.theta`` is ignored; ``base.seed`` is the master seed."""

    base: ModelParams
    theta_values: tuple[float, ...]
    replicates: int = 10
    record_stride: int = 100
    level: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "theta_values", tuple(float(t) for t in self.theta_values))
        if not self.theta_values:
            raise ParameterError("theta_values must be non-empty")
        if any(b <= a for a, b in zip(self.theta_values, self.theta_values[1:])):
            raise ParameterError("theta_values must be strictly ascending")
        if any(not 0.0 <= t <= 1.0 for t in self.theta_values):
            raise ParameterError("theta_values must lie in [0, 1]")
        if self.replicates < 2:
            raise ParameterError(f"replicates must be >= 2 for intervals, got {self.replicates}")
        if self.record_stride < 1:
            raise ParameterError(f"record_stride must be >= 1, got {self.record_stride}")


@dataclass(frozen=True)
class SweepResult:
    theta: float
    phi_values: tuple[float, ...]
    phi_mean: float
    ci_low: float
    ci_high: float
    seeds: tuple[int, ...]


def _final_phi(params: ModelParams, replicate: int) -> float:
    try:
        return disagreement_phi(run(params))
    except Exception as exc:
        raise SweepError(params.theta, replicate, params.seed, repr(exc)) from exc


def run_sweep(
    config: SweepConfig,
    workers: int = 1,
    seed_fn: Optional[Callable[[int, int], int]] = None,
) -> list[SweepResult]:
    """Final phi for every (theta, replicate) cell, summarised per theta.

    ``seed_fn(theta_index, replicate_index)`` overrides the derived seeds.
    Results do not depend on ``workers``.
    """
    if seed_fn is None:
        master = config.base.seed

        def seed_fn(i, j):
            return derive_seed(master, i, j)

    cells = [
        (i, j, config.base.replace(theta=theta, seed=seed_fn(i, j)))
        for i, theta in enumerate(config.theta_values)
        for j in range(config.replicates)
    ]
    if workers > 1:
        phis = Parallel(n_jobs=workers)(delayed(_final_phi)(p, j) for _, j, p in cells)
    else:
        phis = [_final_phi(p, j) for _, j, p in cells]

    results = []
    r = config.replicates
    for i, theta in enumerate(config.theta_values):
        values = tuple(phis[i * r : (i + 1) * r])
        low, high = confidence_interval(values, config.level)
        results.append(
            SweepResult(
                theta=theta,
                phi_values=values,
                phi_mean=math.fsum(values) / r,
                ci_low=low,
                ci_high=high,
                seeds=tuple(p.seed for _, _, p in cells[i * r : (i + 1) * r]),
            )
        )
    return results
