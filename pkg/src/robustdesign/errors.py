"""Exception hierarchy."""


class RobustDesignError(Exception):
    """Base class for all package errors."""


class InvalidInputError(RobustDesignError, ValueError):
    """An argument violates an operation's precondition."""


class UnderdeterminedError(RobustDesignError, ValueError):
    """Fewer samples than basis terms in a regression."""


class ConditioningError(RobustDesignError, ArithmeticError):
    """Regression design matrix is rank deficient."""


class ConfigError(RobustDesignError, ValueError):
    """Experiment or run configuration is invalid."""
