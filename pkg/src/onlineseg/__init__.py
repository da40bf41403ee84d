"""Community-based Schelling segregation model for online platforms."""

from onlineseg.analytics import (
    LandscapeGrid,
    binomial_migration_prob,
    brute_force_migration_prob,
    migration_landscape,
)
from onlineseg.exceptions import (
    CapacityError,
    MetricError,
    ParameterError,
    StateError,
    StatisticsError,
    SweepError,
)
from onlineseg.harness import (
    SweepConfig,
    SweepResult,
    TimeSeries,
    confidence_interval,
    derive_seed,
    run_single,
    run_sweep,
)
from onlineseg.metrics import (
    SegregationReading,
    community_opinion_means,
    disagreement_phi,
    segregation_reading,
    schelling_effect_flag,
)
from onlineseg.model import (
    ModelParams,
    ModelState,
    StepOutcome,
    decide_move,
    init_state,
    relocate,
    run,
    sample_interactors,
    select_focal,
    step,
)

__version__ = "0.1.0"
