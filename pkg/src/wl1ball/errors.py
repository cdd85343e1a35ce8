"""Exception types raised by the projection library.

All errors derive from :class:`ProjectionError`, itself a ``ValueError``,
so generic callers can catch either.
"""


class ProjectionError(ValueError):
    """Base class for every library-specific error."""


class EmptyInput(ProjectionError):
    """The input vector has length zero."""


class LengthMismatch(ProjectionError):
    """Two sequences that must share a length do not."""


class InvalidRadius(ProjectionError):
    """The simplex level ``a`` is not strictly positive."""


class NegativeRadius(InvalidRadius):
    """The ball radius ``a`` is negative."""


class NonPositiveWeight(ProjectionError):
    """A weight that must be strictly positive is zero or negative."""


class EmptySubsequence(ProjectionError):
    """A subsequence pivot was requested for an empty index set."""


class DuplicateIndex(ProjectionError):
    """An index was added to a candidate set that already contains it."""


class MissingIndex(ProjectionError):
    """An index was removed from a candidate set that does not contain it."""


class InvalidP(ProjectionError):
    """The sparsity exponent ``p`` is outside (0, 1]."""


class InvalidEpsilon(ProjectionError):
    """The reweighting smoothing term is not strictly positive."""


class DimensionMismatch(ProjectionError):
    """Matrix/vector shapes in a recovery problem do not line up."""


class InvalidSize(ProjectionError):
    """A requested instance size is not a positive integer."""


class MalformedVectorFile(ProjectionError):
    """A vector file has a bad magic, header, or payload length."""
