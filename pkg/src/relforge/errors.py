"""Exception hierarchy.

Every mathematical failure raised by the library derives from
:class:`RelforgeError`; the CLI reports ``type(exc).__name__`` and exits 1.
"""


class RelforgeError(Exception):
    """Base class of all mathematical failures."""


# field-core
class NotIrreducible(RelforgeError):
    pass


class NotMonic(RelforgeError):
    pass


class AutomorphismFieldMismatch(RelforgeError):
    pass


class FieldTooSmall(RelforgeError):
    pass


# polyring
class ZeroPolynomial(RelforgeError):
    pass


class BoundaryUndecided(RelforgeError):
    pass


class DivisionByZeroPolynomial(RelforgeError, ZeroDivisionError):
    pass


# ore-ops
class KindMismatch(RelforgeError):
    pass


class DenominatorSingularAtOrigin(RelforgeError):
    pass


class DivisionByZeroOperator(RelforgeError, ZeroDivisionError):
    pass


class ZeroOperator(RelforgeError):
    pass


# mahler
class TruncationTooSmall(RelforgeError):
    pass


class NoRelationWithinBounds(RelforgeError):
    pass


class NotAnalyticOnDisk(RelforgeError):
    pass


class NotLevelR(RelforgeError):
    pass


class PointOnBoundary(RelforgeError):
    pass


class IndependenceNotCertified(RelforgeError):
    pass


class RegularityFails(RelforgeError):
    pass


class ValueNotAttained(RelforgeError):
    pass


class OrderMismatch(RelforgeError):
    pass


class PreconditionFailed(RelforgeError):
    pass


# relations
class SizeGuardExceeded(RelforgeError):
    pass


class NoComponentWitness(RelforgeError):
    pass


class IterationCapExceeded(RelforgeError):
    pass


# evalnum
class OrbitHitsSingularity(RelforgeError):
    def __init__(self, msg, ell=None):
        super().__init__(msg)
        self.ell = ell


class NoBoundAvailable(RelforgeError):
    pass


# efunc / cli
class UnknownCorpusEntry(RelforgeError):
    pass


class ExpressionSyntaxError(RelforgeError, SyntaxError):
    """Parse failure; ``position`` is the 0-based offset into the text."""

    def __init__(self, msg, position):
        super().__init__(f"{msg} at position {position}")
        self.position = position


class CorpusValidationError(RelforgeError):
    """A stored corpus object disagrees with its series."""
