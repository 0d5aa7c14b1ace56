"""Structured exceptions shared across the package."""


class ToolError(Exception):
    """Base class for every error this package raises deliberately."""


class AmbientMismatch(ToolError):
    """Two subspaces live over different graded bases."""


class CompositionMismatch(ToolError):
    """Morphisms passed to an operation do not compose."""


class NotPositiveDegree(ToolError):
    """A subspace expected to be positive-degree has a degree-0 component."""


class NotFormal(ToolError):
    """An operation requiring the formal flag received a non-formal map."""


class NotSimplyConnected(ToolError):
    """An operation requiring simple connectivity received degree-1 classes."""


class NotSurjective(ToolError):
    """A morphism expected to be degreewise surjective is not."""


class TruncationExceeded(ToolError):
    """A computation was requested beyond the configured truncation degree."""


class RegionMismatch(ToolError):
    """A planner was asked to use a region the input pair does not belong to."""


class InvalidParameter(ToolError):
    """A constructor received parameters outside its documented range."""


class UnknownEntry(ToolError):
    """A catalog lookup used a name that does not exist."""


class ParseError(ToolError):
    """An input document is malformed; the message carries field context."""
