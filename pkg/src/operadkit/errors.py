"""Shared exception types.

All domain failures raise subclasses of OperadError so callers (and the CLI)
can distinguish bad input from genuine bugs.
"""


class OperadError(Exception):
    """Base class for all domain errors raised by this package."""


class SizeMismatch(OperadError):
    """Sizes or arities of the arguments do not agree."""


class ArityOverflow(OperadError):
    """A composition result would exceed the tabulated arity cap."""


class CapExceeded(OperadError):
    """A construction needs data beyond the requested truncation cap."""


class DimensionMismatch(OperadError):
    """Cube dimensions of the arguments do not agree."""


class PatternMismatch(OperadError):
    """A rewrite was requested at a position where its pattern does not match."""


class InvalidWitness(OperadError):
    """A grid witness fails its validity conditions."""


class SearchExhausted(OperadError):
    """A bounded search ran out of schedule without an answer."""


class InvalidInput(OperadError):
    """Malformed or inconsistent input data."""
