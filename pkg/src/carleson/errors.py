"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): ``InputError``
for bad documents, bad arguments and violated preconditions, and
``NumericError`` for computations that could not be completed at the
requested resolution.
"""


class CarlesonError(Exception):
    pass


class InputError(CarlesonError, ValueError):
    pass


class NumericError(CarlesonError, ArithmeticError):
    pass


# curve validation
class TooFewVertices(InputError):
    pass


class DegenerateEdge(InputError):
    pass


class SelfIntersecting(InputError):
    pass


class NotSimple(SelfIntersecting):
    pass


# preconditions
class SameSideEndpoints(InputError):
    pass


class CenterNotOnBoundary(InputError):
    pass


class PointNotOnCircle(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class NoCrossings(InputError):
    pass


class DepthTooShallow(InputError):
    pass


class ScaleGuardViolation(InputError):
    pass


class InsufficientData(InputError):
    pass


# numerics
class NoConvergence(NumericError):
    pass


class MidpointOnBoundary(NumericError):
    pass


class SameSideApexCandidates(NumericError):
    pass


class ConstructionError(NumericError):
    """A half-scale step failed somewhere inside a triangle tree."""

    def __init__(self, message, level, index):
        super().__init__(f"{message} (level {level}, index {index})")
        self.level = level
        self.index = index


class RadiusWarning(UserWarning):
    """Radius is small compared with the local vertex spacing."""
