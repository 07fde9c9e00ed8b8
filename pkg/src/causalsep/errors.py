"""Exception hierarchy.

Every error raised by the library derives from :class:`CausalSepError`, and the
class name doubles as the stable error name reported by the command line.
"""


class CausalSepError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# graph construction and queries
class GraphError(CausalSepError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownEndpoint(GraphError):
    pass


class DuplicateNode(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class CyclicGraph(GraphError):
    pass


class SameEndpoints(GraphError):
    pass


class GraphTooLarge(GraphError):
    pass


class InvalidPath(GraphError):
    pass


# d-separation
class EndpointConditioned(CausalSepError):
    pass


class BudgetExhausted(CausalSepError):
    """A bounded search ran out of budget before reaching a verdict.

    This is an indeterminate outcome and must never be read as "separated".
    """


class InvalidCleanConnection(CausalSepError):
    pass


# semantics
class MissingUnobservedTerm(CausalSepError):
    pass


class ArityMismatch(CausalSepError):
    pass


class DomainError(CausalSepError):
    pass


# semantic separation
class AlphaBetaEqual(CausalSepError):
    pass


class NotAWitness(CausalSepError):
    pass


class DSeparated(CausalSepError):
    """Raised when a d-connection witness is requested for separated nodes."""


# falsification oracles
class PreconditionViolated(CausalSepError):
    pass


class IllegalIntervention(CausalSepError):
    pass


class InconclusiveRun(CausalSepError):
    """The protocol's runtime side conditions were not met.

    The run is evidence neither for nor against the hypothesis. The partial
    measurement trace is kept on ``trace``.
    """

    def __init__(self, message: str, trace=()):
        super().__init__(message)
        self.trace = list(trace)


# serialization
class FormatError(CausalSepError):
    """Malformed input file (JSON syntax or schema)."""


class MalformedJSON(FormatError):
    pass


class SchemaError(FormatError):
    pass
