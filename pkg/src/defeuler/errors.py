"""Exception hierarchy.

Everything raised on purpose derives from :class:`EulerCalculusError`.  The
CLI maps :class:`ParseError` to exit status 2 and :class:`PreconditionError`
to exit status 3.
"""


class EulerCalculusError(Exception):
    pass


class ParseError(EulerCalculusError):
    pass


class ConfigError(ParseError):
    pass


class PreconditionError(EulerCalculusError):
    pass


# complex construction
class ConstructionError(PreconditionError):
    pass


class DegenerateSimplex(ConstructionError):
    pass


class DuplicateCell(ConstructionError):
    pass


class OverlappingInteriors(ConstructionError):
    pass


class UnknownCell(PreconditionError, KeyError):
    pass


class EmptyRange(ConstructionError):
    pass


class TooFewVertices(ConstructionError):
    pass


# functions and maps
class InvalidMap(PreconditionError):
    pass


class NotOneDimensional(PreconditionError):
    pass


class NotConvex(PreconditionError):
    pass


class NotCounterclockwise(PreconditionError):
    pass


class EpsilonTooLarge(PreconditionError):
    pass


class NotFiberConstant(PreconditionError):
    pass


class NotContinuous(PreconditionError):
    pass


class TieError(PreconditionError):
    pass


class NotManifoldFixture(PreconditionError):
    pass


class NotConstructibleIntegrand(PreconditionError):
    pass


class SupportTouchesBoundary(PreconditionError):
    pass


class SupportOutsideWindow(PreconditionError):
    pass


class ZeroConfidenceNeighborhood(PreconditionError):
    pass


class IncompatibleMethod(PreconditionError):
    pass
