#!/usr/bin/env python3


class IntegralityError(RuntimeError):
    """A coefficient expected to be p-integral has negative valuation."""


class InternalConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class DegreeTooLargeError(ValueError):
    """Truncated exponential/logarithm requested beyond nilpotence degree p."""


class CensusTooLargeError(ValueError):
    """Exhaustive scan would exceed the configured point limit."""


class UsageError(ValueError):
    """Invalid command-line values."""
