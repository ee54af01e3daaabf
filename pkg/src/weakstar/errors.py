"""Exception hierarchy shared by all weakstar modules.

Two broad classes matter to callers (and to the CLI exit-code scheme):
``ParseError`` for malformed input documents, and ``PreconditionError`` for
structurally valid input that violates an operation's stated requirements.
"""

from __future__ import annotations

__all__ = [
    "WeakstarError",
    "ParseError",
    "PreconditionError",
    "BadParameter",
    "UnboundedInput",
    "NotInNormalizingSet",
    "NotAVertex",
    "NotNested",
    "TargetOutsidePolar",
    "VariantPreconditionViolated",
]


class WeakstarError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WeakstarError):
    """A document or literal could not be parsed."""


class PreconditionError(WeakstarError):
    """An operation was invoked on input that violates its preconditions."""


class BadParameter(PreconditionError):
    """A scalar parameter is outside its allowed range."""


class UnboundedInput(PreconditionError):
    """An operation that requires bounded sets received recession rays."""


class NotInNormalizingSet(PreconditionError):
    """A point or set lies outside the normalizing set of a metric config."""


class NotAVertex(PreconditionError):
    """The queried point is not an extreme point of the given polyhedron."""


class NotNested(PreconditionError):
    """A sequence of sets expected to be increasing fails containment."""


class TargetOutsidePolar(PreconditionError):
    """A construction target has vertices outside the prescribed polar ball."""


class VariantPreconditionViolated(PreconditionError):
    """The target does not satisfy the chosen construction variant's entry conditions."""
