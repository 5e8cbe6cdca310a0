"""Exception types shared across the package."""


class PolycubeError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------- manifolds


class UnpairedFace(PolycubeError):
    """A boundary face was left without a gluing partner."""


class BadTranslation(PolycubeError):
    """A gluing override does not move its face onto the partner face."""


class Disconnected(PolycubeError):
    """The glued cube complex is not connected."""


class WallOutsideRange(PolycubeError):
    """A wall was requested at a position that is not an interior interface."""


# ---------------------------------------------------------------- arithmetic


class PrecisionExhausted(PolycubeError):
    """A continued-fraction expansion ran past what the input can certify."""


class IndexOutOfRange(PolycubeError):
    """A special-interval index fell outside its admissible range."""


class SearchBudgetExceeded(PolycubeError):
    """An integer scan hit its budget before finding what was asked for."""


# ---------------------------------------------------------------- geodesics


class SingularHit(PolycubeError):
    """The flow passed within the singular guard distance of a singular edge.

    ``step`` records the index of the offending map application when the
    error is raised from an iterated map.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NumericalStall(PolycubeError):
    """The tracer produced a parameter step too small to trust."""


# ----------------------------------------------------------------- splitting


class AmbiguousPairing(PolycubeError):
    """Probe images do not pair up into a permutation."""


class MagnificationTooSmall(PolycubeError):
    """The magnification factor violates the admissibility condition."""


# ----------------------------------------------------------------- ergodics


class InsufficientSamples(PolycubeError):
    """An orbit is too short for the requested statistic."""


class DegenerateU1(PolycubeError):
    """The reference arc set has measure 0 or 1, so separation is vacuous."""
