"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or unknown configuration input."""


class InfeasibleError(ValueError):
    """A requested allocation/admission instance has no feasible solution."""


class InvariantViolation(AssertionError):
    """A hard runtime invariant failed inside the simulation pipeline."""
