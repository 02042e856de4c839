"""Typed errors and warning categories shared by every cfequiv module."""


class CfEquivError(Exception):
    """Base class for all cfequiv errors."""


class DataError(CfEquivError):
    """Malformed observation or input row."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(CfEquivError):
    """Unknown or unparsable configuration value."""


class MissingInstrumentLevelError(CfEquivError):
    """An instrument value in 0..K has no observations."""

    def __init__(self, z: int):
        self.z = z
        super().__init__(f"missing instrument level: z={z}")


class ConditionError(CfEquivError):
    """First-stage (Condition 1) or cell-occupancy (Condition 2) failure."""

    def __init__(self, condition: int, pair: tuple[int, int], detail: str = "", cell: str | None = None):
        self.condition = condition
        self.pair = pair
        self.cell = cell
        where = f"z pair {pair}"
        if cell is not None:
            where = f"{cell}, {where}"
        message = f"Condition {condition} violated for {where}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class DomainError(CfEquivError):
    """Probability argument outside (0, 1)."""


class OrderingError(CfEquivError):
    """Interval endpoints not strictly increasing."""


class RankDeficiencyError(CfEquivError):
    """Regression design or normal matrix is singular."""


class DegeneracyError(CfEquivError):
    """A ratio's denominator vanishes (e.g. combination weights)."""


class InfeasibleParameterError(CfEquivError):
    """Parameters outside their feasible region."""


class LinkError(CfEquivError):
    """Invalid link family (not strictly increasing, non-finite mean)."""


class NumericalInconsistencyError(CfEquivError):
    """Two independent computations of the same quantity disagree."""


class PropensityClampWarning(UserWarning):
    """A probability argument was clamped into [1e-12, 1 - 1e-12]."""


class XiClampWarning(UserWarning):
    """An estimated combination weight was clamped into [0.01, 0.99]."""


class ConvergenceWarning(UserWarning):
    """An optimizer stopped without meeting its tolerance."""
