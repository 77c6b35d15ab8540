"""Exception hierarchy shared by every module of the package."""


class SandtorsorError(Exception):
    """Base class for all errors raised by sandtorsor."""


class GraphError(SandtorsorError, ValueError):
    """The input multigraph or ribbon structure is malformed."""


class LoopEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class UnknownVertex(GraphError, KeyError):
    pass


class UnknownHalfEdge(GraphError, KeyError):
    pass


class InvalidRotation(GraphError):
    pass


class DisconnectedRestriction(GraphError):
    pass


class DivisorError(SandtorsorError, ValueError):
    pass


class NonzeroDegree(DivisorError):
    pass


class DegreeMismatch(DivisorError):
    pass


class NonCanonicalDivisor(DivisorError):
    pass


class ParityViolation(SandtorsorError, AssertionError):
    """Euler characteristic parity broke; indicates a bug, never bad input."""


class IsomorphismFailure(SandtorsorError):
    """An identity-induced map between sandpile groups does not exist.

    ``witness`` holds the divisor that demonstrates the failure.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PropertyOneFails(IsomorphismFailure):
    pass


class PropertyTwoFails(IsomorphismFailure):
    pass


class TreeError(SandtorsorError, ValueError):
    pass


class NotSameComponent(TreeError):
    pass


class SameEdge(TreeError):
    pass


class TorsorError(SandtorsorError):
    pass


class NonTermination(TorsorError, RuntimeError):
    pass


class StartNotIncident(TorsorError, ValueError):
    pass


class LookupMiss(TorsorError, LookupError):
    pass


class BreakDivisorCollision(TorsorError):
    pass


class RecoveryError(SandtorsorError):
    """Torsor tables are inconsistent with any rotation system."""


class NoCandidate(RecoveryError):
    pass


class MultipleCandidates(RecoveryError):
    pass


class PrematureCycle(RecoveryError):
    pass


class NoMatch(RecoveryError):
    pass


class MultipleProperMatches(RecoveryError):
    pass


class InconsistentConstraints(RecoveryError):
    pass


class HypothesisUnmet(SandtorsorError):
    pass


class FormatError(SandtorsorError, ValueError):
    """A text file or literal could not be parsed; carries the line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
