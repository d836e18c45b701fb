"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(RuntimeError):
    """A request would materialize more data than the configured cap allows."""


class VerificationError(RuntimeError):
    """A wave-number result disagreed with the classical oracle."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
