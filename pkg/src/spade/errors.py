"""Exception hierarchy for the spade engine.

Every error raised by the package derives from SpadeError so callers can
catch one type at an API boundary (the CLI maps SpadeError to exit code 1).
"""


class SpadeError(Exception):
    """Base class for all spade errors."""


# ---- graph store -----------------------------------------------------------

class DuplicateVertexError(SpadeError):
    """Vertex label already interned."""


class UnknownVertexError(SpadeError):
    """Vertex id or label not present in the graph."""


class SelfLoopError(SpadeError):
    """Self-loop edges are rejected."""


class NonPositiveWeightError(SpadeError):
    """Edge weights must be strictly positive."""


class NegativeVertexWeightError(SpadeError):
    """Vertex weights must be nonnegative."""


class EdgeNotFoundError(SpadeError):
    """Requested edge does not exist."""


class WeightUnderflowError(SpadeError):
    """Deletion amount exceeds the stored edge weight."""


# ---- models ----------------------------------------------------------------

class DegenerateLogError(SpadeError):
    """log(x + c) would be <= 0 for the requested degree."""


# ---- peeling / incremental -------------------------------------------------

class BadPrefixIndexError(SpadeError):
    """Prefix index outside [0, |V|]."""


class WrongDeltaKindError(SpadeError):
    """Batch reorder received deletion events."""


class DeletionNotAppliedError(SpadeError):
    """Edge still present in the graph when a delete reorder was requested."""


# ---- oracle ----------------------------------------------------------------

class InstanceTooLargeError(SpadeError):
    """Exhaustive search limited to small vertex counts."""


class TooManyEdgesError(SpadeError):
    """Requested edge count exceeds n*(n-1)."""


# ---- stream lab ------------------------------------------------------------

class TimestampOrderError(SpadeError):
    """Stream timestamps are not non-decreasing."""


class NoLabeledEventsError(SpadeError):
    """Prevention ratio needs at least one labeled fraud event."""


class EmptyWindowError(SpadeError):
    """Target detection window is empty."""


# ---- io --------------------------------------------------------------------

class MalformedLineError(SpadeError):
    """Stream file line could not be parsed."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
