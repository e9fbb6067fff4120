class SpikeflowError(Exception):
    """Base class for package errors."""


class DomainError(SpikeflowError):
    """Input outside the documented domain of an operation."""


class NumericError(SpikeflowError):
    """A numeric procedure failed to converge or lost its bracket."""
