class ParameterError(ValueError):
    """Raised when a model or analysis parameter is out of bounds."""


class StateError(RuntimeError):
    """Raised when a model state cannot support the requested operation."""


class MetricError(ValueError):
    """Raised when a metric is undefined for the given state."""


class CapacityError(ValueError):
    """Raised when an enumeration would exceed its size bound."""


class StatisticsError(ValueError):
    pass


class SweepError(RuntimeError):
    """A replicate failed during a sweep.

    Carries the coordinates of the failing cell so it can be re-run alone.
    """

    def __init__(self, theta, replicate, seed, cause):
        self.theta = theta
        self.replicate = replicate
        self.seed = seed
        self.cause = cause
        super().__init__(
            f"replicate {replicate} at theta={theta!r} (seed={seed}) failed: {cause!r}"
        )
