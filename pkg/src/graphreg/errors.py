"""Exception types shared across the package."""


class GraphRegError(Exception):
    """Base class for every error raised by graphreg."""


class GraphFormatError(GraphRegError, ValueError):
    """A graph document or constructor argument violates the data model.

    ``location`` is a JSON-pointer-like string such as ``edges[2].dst``
    (empty when the problem is not tied to one place).
    """

    def __init__(self, message, location=""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnknownVertexError(GraphRegError, KeyError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex!r}")

    def __str__(self):
        return self.args[0]


class PreconditionError(GraphRegError, ValueError):
    """An operation was called outside its documented domain."""


class CycleError(PreconditionError):
    """The operation requires an acyclic graph."""


class ConditionKError(PreconditionError):
    """The operation requires Condition (K); ``witness`` is a failing vertex."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotRowFiniteError(PreconditionError):
    pass


class InternalConsistencyError(GraphRegError, AssertionError):
    """Two independent computations of the same quantity disagreed."""


class VerificationError(GraphRegError, AssertionError):
    """A symbolic identity that must hold was found to fail."""

    def __init__(self, message, identity=None):
        self.identity = identity
        super().__init__(message)
