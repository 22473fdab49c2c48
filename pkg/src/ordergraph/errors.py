"""Exception hierarchy.

Everything derives from :class:`OrderingError`, itself a ``ValueError``, so
callers that only care about "bad input" can catch one type.
"""


class OrderingError(ValueError):
    pass


class ValidationError(OrderingError):
    """Input violates a domain invariant."""


class NonSquareError(ValidationError):
    pass


class NegativeEntryError(ValidationError):
    pass


class LabelMismatchError(ValidationError):
    pass


class SizeMismatchError(ValidationError):
    pass


class InvalidPermutationError(ValidationError):
    pass


class LayoutMismatchError(ValidationError):
    pass


class IncompleteTaxonomyError(ValidationError):
    pass


class DuplicateClassError(ValidationError):
    pass


class DegenerateSizeError(ValidationError):
    pass


class MissingLayoutError(ValidationError):
    pass


class PositionOutOfRangeError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class TooLargeError(OrderingError):
    """Exhaustive search requested on an instance beyond the guard."""


class ScoreOverflowError(OrderingError):
    """The score could exceed the 64-bit accumulator used by the fast kernels."""


class ParseError(OrderingError):
    pass


class AmbiguousHeaderError(ParseError):
    """First CSV row mixes numeric and non-numeric fields."""
